#include "halfline/quadrature.hpp"

#include "halfline/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace halfline {

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
    if (points < 1) {
        fail(ErrorKind::invalid_argument, "gauss_legendre: points must be >= 1");
    }
    const int n = points;
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) <= 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        nodes[n / 2] = 0.0;
    }
}

HalfLineGrid build_interval_grid(double a, double b, int n_panels, RuleSpec rule) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        fail(ErrorKind::invalid_argument, "grid: interval must satisfy a < b");
    }
    if (n_panels < 1) {
        fail(ErrorKind::invalid_argument, "grid: n_panels must be >= 1");
    }
    HalfLineGrid g;
    g.x_max_ = b;
    g.n_panels_ = n_panels;
    g.rule_ = rule;
    const double h = (b - a) / n_panels;

    if (rule.rule == QuadratureRule::trapezoid) {
        g.nodes_.resize(n_panels + 1);
        g.weights_.resize(n_panels + 1);
        for (int i = 0; i <= n_panels; ++i) {
            g.nodes_[i] = (i == n_panels) ? b : a + i * h;
            g.weights_[i] = (i == 0 || i == n_panels) ? 0.5 * h : h;
        }
        return g;
    }

    if (rule.points_per_panel < 1) {
        fail(ErrorKind::invalid_argument, "grid: points_per_panel must be >= 1");
    }
    std::vector<double> ref_nodes;
    std::vector<double> ref_weights;
    gauss_legendre(rule.points_per_panel, ref_nodes, ref_weights);
    const std::size_t p = ref_nodes.size();
    g.nodes_.reserve(n_panels * p);
    g.weights_.reserve(n_panels * p);
    for (int k = 0; k < n_panels; ++k) {
        const double lo = a + k * h;
        const double hi = (k + 1 == n_panels) ? b : a + (k + 1) * h;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < p; ++q) {
            g.nodes_.push_back(mid + half * ref_nodes[q]);
            g.weights_.push_back(half * ref_weights[q]);
        }
    }
    return g;
}

HalfLineGrid build_grid(double x_max, int n_panels, RuleSpec rule) {
    if (!(x_max > 0.0)) {
        fail(ErrorKind::invalid_argument, "grid: x_max must be > 0");
    }
    return build_interval_grid(0.0, x_max, n_panels, rule);
}

double integrate(const HalfLineGrid& grid, std::span<const double> samples) {
    if (samples.size() != grid.size()) {
        fail(ErrorKind::invalid_argument,
             "integrate: expected " + std::to_string(grid.size()) + " samples, got " +
                 std::to_string(samples.size()));
    }
    const auto w = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sum += w[i] * samples[i];
    }
    return sum;
}

} // namespace halfline

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace halfline {

enum class QuadratureRule { trapezoid, gauss_legendre };

struct RuleSpec {
    QuadratureRule rule = QuadratureRule::gauss_legendre;
    int points_per_panel = 4; // ignored for trapezoid
};

/// Quadrature nodes and weights on the truncated half-line [0, x_max].
///
/// Nodes are strictly increasing. The composite Gauss-Legendre rule never
/// places a node at 0 or at x_max; the trapezoid rule places nodes at both.
class HalfLineGrid {
public:
    HalfLineGrid() = default;

    double x_max() const noexcept { return x_max_; }
    int n_panels() const noexcept { return n_panels_; }
    RuleSpec rule() const noexcept { return rule_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Width of one panel, x_max / n_panels.
    double panel_width() const noexcept { return x_max_ / n_panels_; }

    friend HalfLineGrid build_grid(double x_max, int n_panels, RuleSpec rule);
    friend HalfLineGrid build_interval_grid(double a, double b, int n_panels, RuleSpec rule);

private:
    double x_max_ = 0.0;
    int n_panels_ = 0;
    RuleSpec rule_{};
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

HalfLineGrid build_grid(double x_max, int n_panels, RuleSpec rule = {});

/// Same construction on [a, b]. Used for far-field windows beyond x_max; the
/// returned grid reports x_max() == b.
HalfLineGrid build_interval_grid(double a, double b, int n_panels, RuleSpec rule = {});

/// Σ w_i s_i, summed in ascending node order.
double integrate(const HalfLineGrid& grid, std::span<const double> samples);

/// Convenience: integrate a callable sampled at the nodes.
template <class F>
double integrate_fn(const HalfLineGrid& grid, F&& f) {
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * f(nodes[i]);
    }
    return sum;
}

} // namespace halfline

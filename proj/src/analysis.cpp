#include "halfline/analysis.hpp"

#include "halfline/error.hpp"
#include "halfline/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace halfline {

Lemma2Certificate lemma2_certificate(std::span<const double> fstar, const KernelConstants& constants,
                                     const NonlinearitySpec& g, const HalfLineGrid& grid,
                                     double symmetry_residual, double symmetry_tol) {
    if (symmetry_residual > symmetry_tol) {
        fail(ErrorKind::hypothesis_not_met, "lemma2_certificate: kernel is not symmetric");
    }
    if (fstar.size() != grid.size()) {
        fail(ErrorKind::invalid_argument, "lemma2_certificate: profile size mismatch");
    }
    std::vector<double> excess(fstar.size());
    for (std::size_t i = 0; i < fstar.size(); ++i) {
        excess[i] = eval_G(g, fstar[i]) - fstar[i];
    }
    Lemma2Certificate c;
    c.lhs = integrate(grid, excess);
    c.rhs = g.eta * constants.bracket();
    c.passed = c.lhs <= c.rhs + 1e-8;
    return c;
}

Lemma3Certificate lemma3_certificate(std::span<const double> fstar, const HalfLineGrid& grid,
                                     const NonlinearitySpec& g, const KernelConstants& constants) {
    if (fstar.size() != grid.size() || fstar.empty()) {
        fail(ErrorKind::invalid_argument, "lemma3_certificate: profile size mismatch");
    }
    const double eta = g.eta;
    // First index from which f* stays >= η/2.
    std::size_t start = fstar.size();
    for (std::size_t i = fstar.size(); i-- > 0;) {
        if (fstar[i] >= 0.5 * eta) {
            start = i;
        } else {
            break;
        }
    }
    if (start == fstar.size()) {
        fail(ErrorKind::hypothesis_not_met, "lemma3_certificate: f* never reaches eta/2");
    }
    Lemma3Certificate c;
    const auto nodes = grid.nodes();
    const auto w = grid.weights();
    c.r = nodes[start];
    c.epsilon = *std::min_element(fstar.begin() + static_cast<std::ptrdiff_t>(start), fstar.end());
    for (std::size_t i = start; i < fstar.size(); ++i) {
        c.lhs += w[i] * (eta - fstar[i]);
    }
    if (eta - c.epsilon <= 1e-6) {
        c.degenerate = true;
        c.rhs = std::numeric_limits<double>::quiet_NaN();
        c.passed = c.lhs <= 1e-8;
        return c;
    }
    const double ge = eval_G(g, c.epsilon);
    c.rhs = (eta - c.epsilon) * eta / (ge - c.epsilon) * constants.bracket();
    c.passed = c.lhs <= c.rhs + 1e-8;
    return c;
}

double jensen_certificate(const OperatorMatrix& a, const NonlinearitySpec& g,
                          std::span<const double> values, int threads) {
    const std::size_t n = a.size();
    if (values.size() != n) {
        fail(ErrorKind::invalid_argument, "jensen_certificate: size mismatch");
    }
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = eval_Q(g, values[i]);
    }
    std::vector<double> lhs(n);
    std::vector<double> mean(n);
    a.apply(q, lhs, threads);
    a.apply(values, mean, threads);
    const auto mass = a.row_mass();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double avg = std::min(mean[i] / mass[i], g.eta);
        worst = std::min(worst, lhs[i] - mass[i] * eval_Q(g, avg));
    }
    return worst;
}

std::vector<double> perturbed_start(std::span<const double> fstar, std::span<const double> nodes,
                                    double eta, double scale, std::uint64_t seed, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double amplitude = scale * eta * (0.5 + 0.5 * unit(rng));
    const double span = nodes.empty() ? 1.0 : nodes.back();
    const double center = unit(rng) * 0.25 * span;
    const double width = 0.5 + 4.5 * unit(rng);
    // Alternate bumps above and below f*.
    const double sign = (trial % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> f0(fstar.size());
    for (std::size_t i = 0; i < fstar.size(); ++i) {
        const double z = (nodes[i] - center) / width;
        f0[i] = std::clamp(fstar[i] + sign * amplitude * std::exp(-z * z), 0.0, eta);
    }
    return f0;
}

UniquenessProbe uniqueness_probe(const OperatorMatrix& a, const NonlinearitySpec& g,
                                 std::span<const double> fstar, const UniquenessOptions& options) {
    if (a.weighted_symmetry_residual() > options.symmetry_tol) {
        fail(ErrorKind::hypothesis_not_met, "uniqueness_probe: kernel is not symmetric");
    }
    UniquenessProbe p;
    p.threshold = 10.0 * options.tol;
    const auto nodes = a.grid().nodes();
    for (int trial = 0; trial < options.trials; ++trial) {
        auto f0 = perturbed_start(fstar, nodes, g.eta, options.perturbation_scale, options.seed,
                                  trial);
        const auto run = iterate_from(a, g, std::move(f0), options.tol, options.max_iter,
                                      options.threads);
        if (!run.converged) {
            p.inconclusive = true;
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < fstar.size(); ++i) {
            dev = std::max(dev, std::abs(run.profile[i] - fstar[i]));
        }
        p.deviations.push_back(dev);
        p.max_deviation = std::max(p.max_deviation, dev);
    }
    p.passed = !p.inconclusive && p.max_deviation <= p.threshold;
    return p;
}

} // namespace halfline

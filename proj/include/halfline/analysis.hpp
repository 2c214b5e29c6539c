#pragma once

#include "halfline/kernels.hpp"
#include "halfline/nonlinearity.hpp"
#include "halfline/operator.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace halfline {

/// ∫_0^∞ (G(f) - f) <= η (∫γ + ∫(λ*-1)∫K* + ∫|y|K*) for symmetric kernels.
struct Lemma2Certificate {
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

/// Throws hypothesis_not_met when symmetry_residual > symmetry_tol.
Lemma2Certificate lemma2_certificate(std::span<const double> fstar, const KernelConstants& constants,
                                     const NonlinearitySpec& g, const HalfLineGrid& grid,
                                     double symmetry_residual, double symmetry_tol = 1e-12);

/// ∫_r^∞ (η - f) <= (η-ε)η / (G(ε)-ε) · bracket, with r the first node after
/// which f >= η/2 everywhere and ε = min_{x>=r} f. The lhs sums w_i (η - f_i)
/// over nodes from r on, so it also counts the part of r's quadrature cell
/// left of r; this only errs upward.
struct Lemma3Certificate {
    double lhs = 0.0;
    double rhs = 0.0;
    double r = 0.0;
    double epsilon = 0.0;
    bool degenerate = false; // ε within 1e-6 of η: rhs not computed
    bool passed = false;
};

/// Throws hypothesis_not_met when no node satisfies the r construction.
Lemma3Certificate lemma3_certificate(std::span<const double> fstar, const HalfLineGrid& grid,
                                     const NonlinearitySpec& g, const KernelConstants& constants);

/// min_i [Σ_j A_ij Q(g_j) - m_i Q(Σ_j A_ij g_j / m_i)], m_i the row mass.
/// Convexity of Q makes this non-negative.
double jensen_certificate(const OperatorMatrix& a, const NonlinearitySpec& g,
                          std::span<const double> values, int threads = 1);

struct UniquenessProbe {
    std::vector<double> deviations; // per trial
    double max_deviation = 0.0;
    double threshold = 0.0;         // 10 × tol
    bool inconclusive = false;      // some restart failed to converge
    bool passed = false;
};

struct UniquenessOptions {
    double perturbation_scale = 0.1; // fraction of η
    int trials = 5;
    double tol = 1e-10;
    int max_iter = 10000;
    std::uint64_t seed = 0;
    double symmetry_tol = 1e-12;
    int threads = 1;
};

/// Heuristic: restart the iteration from randomly bumped copies of f* and
/// measure how far the restarts land from f*. Throws hypothesis_not_met for a
/// non-symmetric kernel.
UniquenessProbe uniqueness_probe(const OperatorMatrix& a, const NonlinearitySpec& g,
                                 std::span<const double> fstar, const UniquenessOptions& options);

/// Starting profile of one probe trial; deterministic in (seed, trial).
std::vector<double> perturbed_start(std::span<const double> fstar, std::span<const double> nodes,
                                    double eta, double scale, std::uint64_t seed, int trial);

struct CertificateBundle {
    Lemma2Certificate lemma2{};
    Lemma3Certificate lemma3{};
    double asymptote_gap = 0.0;   // η - f*(x_last)
    double asymptote_bound = 0.0; // max(5ηγ(x_last), 1e-6)
    double jensen_min_margin = 0.0;
    UniquenessProbe uniqueness{};

    bool asymptote_ok() const noexcept { return asymptote_gap <= asymptote_bound; }
    bool jensen_ok() const noexcept { return jensen_min_margin >= -1e-12; }
};

} // namespace halfline

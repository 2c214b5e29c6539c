#pragma once

#include "halfline/error.hpp"
#include "halfline/kernels.hpp"
#include "halfline/nonlinearity.hpp"
#include "halfline/operator.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace halfline {

struct PicardOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    /// Keep f_0 .. f_{keep_iterates-1} in the report (for squeeze checks).
    std::size_t keep_iterates = 0;
    int threads = 1;
};

/// Outcome of the monotone successive approximations f_{n+1} = A G(f_n), f_0 ≡ η.
struct SolveReport {
    int iterations = 0; // number of operator applications
    bool converged = false;
    /// sup_diffs[n] = ‖f_n - f_{n+1}‖_∞, n = 0, 1, ...
    std::vector<double> sup_diffs;
    double sigma0 = 1.0;
    double b_tail = 1.0; // f_2 / f_1 at the last node
    bool rate_bound_ok = false;
    bool monotone_ok = true;
    double max_monotone_increase = 0.0; // max_n max_i (f_{n+1} - f_n)_i
    double residual_inf = 0.0;
    bool interior_ok = false; // 0 < f* < η at every node, judged on the defect
    std::vector<double> profile;
    /// η - f*, carried through the iteration so it keeps relative precision
    /// where f* rounds to η.
    std::vector<double> defect;
    double eta = 1.0;
    double cond4_alpha = 0.5;
    std::vector<std::vector<double>> iterates;
};

/// Thrown when max_iter is exhausted; carries everything computed so far.
class PicardNonConvergence : public Error {
public:
    PicardNonConvergence(const std::string& what, SolveReport partial)
        : Error(ErrorKind::non_convergence, what), partial_(std::move(partial)) {}
    const SolveReport& partial() const noexcept { return partial_; }

private:
    SolveReport partial_;
};

/// f'_i = Σ_j A_ij G(f_j). Entries of f below zero by at most 1e-9 are
/// treated as zero; larger excursions outside [0, η] throw domain_violation.
std::vector<double> apply_hammerstein(const OperatorMatrix& a, const NonlinearitySpec& g,
                                      std::span<const double> f, int threads = 1);

/// Same map written for the defect d = η - f:
///
///   d'_i = η γ_i + Σ_j A_ij (η - G(η - d_j))
///
/// Equal to η - apply_hammerstein(η - d) in exact arithmetic.
std::vector<double> apply_hammerstein_defect(const OperatorMatrix& a, const NonlinearitySpec& g,
                                             std::span<const double> d, int threads = 1);

/// Iterates the defect map from d_0 ≡ 0, i.e. f_0 ≡ η.
SolveReport solve_picard(const OperatorMatrix& a, const NonlinearitySpec& g,
                         const PicardOptions& options = {});

/// min_i f2_i / f1_i, clamped to (0, 1].
double estimate_sigma0(std::span<const double> f1, std::span<const double> f2);

/// η α^{n-1} ln(1/σ0) for n = 0 .. sup_diffs.size()-1; entry 0 is NaN (the
/// bound starts at n = 1).
std::vector<double> rate_envelope(const SolveReport& report, double cond4_alpha);

/// True iff sup_diffs[n] <= envelope[n] + 1e-12 for all n >= 1.
/// Throws inconsistent_report when σ0 == 1 but some diff is nonzero.
bool verify_rate_bound(const SolveReport& report, double cond4_alpha);

/// Largest violation of σ0^{α^{n-1}} f_n <= f_{n+1} <= f_n over the kept
/// iterates (n >= 1). Non-positive means the squeeze holds exactly.
double squeeze_violation(std::span<const std::vector<double>> iterates, double sigma0,
                         double cond4_alpha);

/// Plain fixed-point iteration from an arbitrary start, no monotonicity
/// assertion. Used for restart probes.
struct RestartResult {
    std::vector<double> profile;
    int iterations = 0;
    bool converged = false;
    double last_diff = 0.0;
};
RestartResult iterate_from(const OperatorMatrix& a, const NonlinearitySpec& g,
                           std::vector<double> f0, double tol, int max_iter, int threads = 1);

/// Nyström interpolant f(x) = ∫ K(x,t) G(f(t)) dt evaluated off-grid.
double nystrom_interpolate(const KernelSpec& spec, const HalfLineGrid& grid,
                           const HalfLineGrid& window, std::span<const double> g_of_profile,
                           double x);

} // namespace halfline

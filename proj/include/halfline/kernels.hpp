#pragma once

#include "halfline/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace halfline {

enum class BaseKind { gaussian, exp_mixture };

/// One atom c·e^{-s|x|} of an exponential-mixture base kernel.
struct ExpAtom {
    double c = 0.0;
    double s = 0.0;
};

/// Even, positive base kernel K0 with half-line mass 1/2.
class BaseKernel {
public:
    /// K0(x) = e^{-x²}/√π.
    static BaseKernel gaussian();

    /// K0(x) = Σ c_j e^{-s_j|x|}. Requires c_j > 0, s_j > 0 and Σ 2c_j/s_j = 1
    /// to within 1e-12.
    static BaseKernel exp_mixture(std::vector<ExpAtom> atoms);

    BaseKind kind() const noexcept { return kind_; }
    std::span<const ExpAtom> atoms() const noexcept { return atoms_; }

    double operator()(double x) const noexcept;

    /// ∫_x^∞ K0(y) dy for x >= 0, closed form.
    double tail_mass(double x) const noexcept;

    /// C^∞ on ℝ. The exponential mixture has a derivative jump at 0, so K0(x-t)
    /// has a kink along t = x.
    bool smooth() const noexcept { return kind_ == BaseKind::gaussian; }

    /// Distance beyond which the remaining half-line mass is below 1e-18.
    double decay_width() const noexcept;

private:
    BaseKind kind_ = BaseKind::gaussian;
    std::vector<ExpAtom> atoms_;
};

enum class LambdaForm { exp_gap, rational_gap };

/// λ, μ and λ* for the modulated families.
///
///   λ(x)  = 1 - (1-d*)e^{-x}        (exp-gap)
///   λ(x)  = 1 - (1-d*)/(1+x²)       (rational-gap)
///   μ(x,t) = λ(x) + λ(t) - λ(x)λ(t)
///   λ*(t) = 1 + e^{-t}/t^l
struct Modulation {
    LambdaForm form = LambdaForm::exp_gap;
    double d_star = 0.5; // in (0, 1]
    double l = 0.5;      // in (0, 1)

    /// 1 - λ(x), evaluated without cancellation.
    double gap(double x) const noexcept;
    double lambda(double x) const noexcept { return 1.0 - gap(x); }
    double mu(double x, double t) const noexcept;
    double lambda_star(double t) const noexcept;
};

enum class KernelFamily { A, B, C };

struct KernelSpec {
    KernelFamily family = KernelFamily::C;
    BaseKernel base = BaseKernel::gaussian();
    Modulation modulation{};
    double delta = 0.5;   // family B, in (0, 1)
    double epsilon = 0.5; // family C, in (0, 1)
};

/// Throws Error(spec_invalid) when a parameter leaves its admissible range.
void validate(const KernelSpec& spec);

double eval_base_kernel(const BaseKernel& base, double x);

/// K(x, t) for x, t >= 0.
double eval_kernel(const KernelSpec& spec, double x, double t);

/// K* with K(x,t) <= λ*(t) K*(x-t): (1+ε)K0 for family C, K0 otherwise.
double dominating_kernel(const KernelSpec& spec, double y);

/// Far-field window [x_max, x_max + W] used to account for kernel mass the
/// truncated grid cannot see. Panel width matches the main grid.
HalfLineGrid far_field_window(const KernelSpec& spec, const HalfLineGrid& grid);

/// ∫_{x_max}^∞ K(x, t) dt by quadrature over the far-field window.
double far_field_mass(const KernelSpec& spec, const HalfLineGrid& window, double x);

/// ∫_0^∞ f(t) dt for an integrand built on K(x, ·): grid quadrature plus the
/// far-field window for a smooth base; for a kinked base the range is split
/// at t = x and each piece gets its own composite rule of the grid's panel
/// width, so the kink never sits inside a panel.
double row_integral(const KernelSpec& spec, const HalfLineGrid& grid, const HalfLineGrid& window,
                    double x, const std::function<double(double)>& f);

/// ∫_0^∞ K(x_i, t) dt at every node, via row_integral.
std::vector<double> row_mass_profile(const KernelSpec& spec, const HalfLineGrid& grid);

/// Non-negative integrand h with γ(x) = c·∫_x^∞K0 + ∫_0^∞ h(x,t) dt:
///
///   A  h = (1-λ(x))(1-λ(t)) K0(x-t),                 c = 1
///   B  h = (1-λ(x))(1-λ(t)) (K0(x-t) - δK0(x+t)),    c = 1 + δ
///   C  h = ((1-λ(x)) + (1-λ(t)))/2 (K0(x-t) + εK0(x+t)), c = 1 - ε
double modulation_deficit(const KernelSpec& spec, double x, double t);
double tail_coefficient(const KernelSpec& spec) noexcept;

/// γ(x_i) from the complement form above: a sum of non-negative terms, so it
/// keeps full relative precision where γ is far below machine epsilon.
std::vector<double> gamma_profile(const KernelSpec& spec, const HalfLineGrid& grid);

/// γ(x_i) = 1 - row mass; the direct route, used to cross-check gamma_profile.
std::vector<double> gamma_direct(const KernelSpec& spec, const HalfLineGrid& grid);

/// ∫_0^∞ (λ*(t) - 1) dt = ∫_0^∞ t^{-l} e^{-t} dt, by quadrature after
/// removing the singularity at 0.
double lambda_star_excess_integral(double l);

/// Right-hand-side ingredients of the a-priori integral bound.
struct KernelConstants {
    double gamma_integral = 0.0;           // ∫_0^∞ γ
    double lambda_star_excess = 0.0;       // ∫_0^∞ (λ* - 1)
    double dominating_mass = 0.0;          // ∫_R K*
    double dominating_first_moment = 0.0;  // ∫_R |y| K*(y) dy

    /// ∫γ + ∫(λ*-1)·∫K* + ∫|y|K*.
    double bracket() const noexcept {
        return gamma_integral + lambda_star_excess * dominating_mass + dominating_first_moment;
    }
};

KernelConstants kernel_constants(const KernelSpec& spec, const HalfLineGrid& grid,
                                 std::span<const double> gamma);

struct ConditionReport {
    bool positivity_ok = false;
    std::size_t positivity_probes = 0;
    std::size_t positivity_unresolved = 0; // K0(x-t) underflowed
    double min_probe_value = 0.0;

    double sup_row_mass = 0.0;
    double row_mass_tail = 0.0; // at the last node
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    double gamma_route_gap = 0.0; // max |γ_complement - (1 - row mass)|
    double gamma_tail = 0.0;
    double gamma_tail_bound = 0.0;
    double symmetry_residual = 0.0;
    double domination_margin = 0.0;
    double tol = 0.0;

    KernelConstants constants{};

    bool row_mass_ok() const noexcept { return sup_row_mass <= 1.0 + tol; }
    bool gamma_nonnegative_ok() const noexcept { return gamma_min >= -tol; }
    bool gamma_routes_ok() const noexcept { return gamma_route_gap <= tol; }
    bool gamma_nontrivial_ok() const noexcept { return gamma_max > tol; }
    bool gamma_tail_ok() const noexcept { return gamma_tail <= 10.0 * gamma_tail_bound + tol; }
    bool symmetry_ok() const noexcept { return symmetry_residual <= tol; }
    bool domination_ok() const noexcept { return domination_margin >= -tol; }

    bool passed() const noexcept {
        return positivity_ok && row_mass_ok() && gamma_nonnegative_ok() && gamma_routes_ok() &&
               gamma_nontrivial_ok() && gamma_tail_ok() && symmetry_ok() && domination_ok();
    }
};

/// Verdicts on γ alone (condition b); used by check_kernel_conditions and
/// for externally supplied row masses.
void assess_gamma(std::span<const double> gamma, ConditionReport& report);

/// Evenly spaced node indices, both ends included.
std::vector<std::size_t> probe_indices(std::size_t n_nodes, std::size_t probe_count);

ConditionReport check_kernel_conditions(const KernelSpec& spec, const HalfLineGrid& grid,
                                        std::size_t probe_count, double tol);

} // namespace halfline

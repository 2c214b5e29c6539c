#pragma once

#include <cstddef>

namespace halfline {

enum class GFamily { I, II, III };

/// Concave nonlinearity G with G(0) = 0 and fixed point G(η) = η.
///
///   I   G(u) = u^α
///   II  G(u) = (u^{α*} + u) / 2
///   III G(u) = (u^{α̃} + u^{α*}) / 2,  α̃ < α*
///
/// cond4_alpha is the exponent with G(σu) >= σ^{cond4_alpha} G(u) on
/// σ ∈ (0,1), u ∈ [0, η]: α for I, (1+α*)/2 for II, (α̃+α*)/2 for III.
struct NonlinearitySpec {
    GFamily family = GFamily::I;
    double alpha = 0.5;
    double alpha_star = 0.5;
    double alpha_tilde = 0.25;
    double eta = 1.0;
    double cond4_alpha = 0.5;
};

/// Validates the exponents, fills eta and cond4_alpha. Throws spec_invalid.
NonlinearitySpec make_nonlinearity(GFamily family, double alpha, double alpha_star,
                                   double alpha_tilde);

/// Exponent of condition 4 for the family's catalog choice.
double condition4_alpha(const NonlinearitySpec& spec);

double eval_G(const NonlinearitySpec& spec, double u);

/// η - G(η - d) for d ∈ [0, η], evaluated without cancellation for small d.
/// Relies on G(η) = η with η = 1, which every catalog family satisfies.
double eval_G_complement(const NonlinearitySpec& spec, double d);

/// Positive fixed point by bisection of G(u) - u on [1e-8, 10]. Ignores
/// spec.eta. Throws spec_invalid if no sign change is found.
double find_eta(const NonlinearitySpec& spec);

/// Q = G^{-1} on [0, η].
double eval_Q(const NonlinearitySpec& spec, double v);

/// (σ^{α*} - σ^α) / (σ^α - σ), which must be >= 1 for family II.
double inequality69_ratio(double alpha_star, double alpha, double sigma);

struct GConditionReport {
    double tol = 0.0;

    double min_increment = 0.0;        // min G(u_{k+1}) - G(u_k)
    double max_second_difference = 0.0; // concavity: must be <= tol
    double g_at_zero = 0.0;
    double fixed_point_residual = 0.0;  // |G(η) - η|

    double condition4_min_margin = 0.0; // min G(σu) - σ^α G(u)
    double condition4_max_deviation = 0.0; // max |G(σu) - σ^α G(u)|
    std::size_t condition4_violations = 0;

    double eq55_min_margin = 0.0;       // min uQ(v) - Q(uv)
    std::size_t eq55_violations = 0;

    double q_round_trip_error = 0.0;    // max |Q(G(u)) - u|
    double q_min_second_difference = 0.0;
    bool q_below_identity = false;      // Q(v) < v on (0, η)

    bool increasing_ok() const noexcept { return min_increment > 0.0; }
    bool concave_ok() const noexcept { return max_second_difference <= tol; }
    bool fixed_point_ok() const noexcept { return g_at_zero == 0.0 && fixed_point_residual <= tol; }
    bool condition4_ok() const noexcept { return condition4_violations == 0; }
    bool eq55_ok() const noexcept { return eq55_violations == 0; }
    bool q_convex_ok() const noexcept { return q_min_second_difference >= -tol; }

    bool passed() const noexcept {
        return increasing_ok() && concave_ok() && fixed_point_ok() && condition4_ok() &&
               eq55_ok() && q_convex_ok() && q_below_identity;
    }
};

GConditionReport check_G_conditions(const NonlinearitySpec& spec, std::size_t n_u,
                                    std::size_t n_sigma, double tol);

} // namespace halfline

#pragma once

#include "halfline/error.hpp"
#include "halfline/nonlinearity.hpp"
#include "halfline/operator.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace halfline {

enum class G0Family { g1, g2 };
enum class G1Family { g3, g4 };

/// Coefficient profile L(x) ∈ [0, 1] for the g4 form.
struct LProfile {
    enum class Kind { constant, exp_rise } kind = Kind::constant;
    double value = 1.0; // constant: L ≡ value; exp_rise: L(x) = 1 - (1-value)e^{-x}
    double operator()(double x) const noexcept;
};

/// Φ(x) = G0(x, Φ(x)) + ∫ K(x,t) G1(t, Φ(t)) dt with
///
///   g1  G0(x,u) = 2ξγ(x)u / (u + ξγ(x))
///   g2  G0(x,u) = g1 + ε*(x) u²,  ε*(x) = eps_star_fraction · bound(x)
///   g3  G1(x,u) = η - G(η - u)
///   g4  G1(x,u) = L(x) (η - G(η - u))
struct NemytskySpec {
    G0Family g0 = G0Family::g1;
    G1Family g1 = G1Family::g3;
    double xi = 0.25;               // in (0, η/2)
    double eps_star_fraction = 0.5; // g2 only, in [0, 1]
    LProfile l_profile{};           // g4 only
    NonlinearitySpec base_g{};
};

/// Node-wise data for evaluating G0/G1 on one grid.
class NemytskyForms {
public:
    /// gamma: γ at the grid nodes (negative rounding noise is clamped to 0).
    NemytskyForms(NemytskySpec spec, std::span<const double> nodes, std::span<const double> gamma);

    /// Overrides ε*(x_i) directly (used for negative controls).
    NemytskyForms(NemytskySpec spec, std::span<const double> nodes, std::span<const double> gamma,
                  std::vector<double> eps_star);

    const NemytskySpec& spec() const noexcept { return spec_; }
    std::span<const double> gamma() const noexcept { return gamma_; }
    std::span<const double> eps_star() const noexcept { return eps_star_; }

    /// ((η-2ξ)γ + ξγ²) / (η(η + ξγ)) at node i.
    double eps_star_bound(std::size_t i) const noexcept;

    double g0(std::size_t i, double u) const;
    double g1(std::size_t i, double u) const;

private:
    void check_u(double u) const;

    NemytskySpec spec_;
    std::vector<double> gamma_;
    std::vector<double> l_values_;
    std::vector<double> eps_star_;
};

/// Throws spec_invalid for out-of-range parameters.
void validate(const NemytskySpec& spec);

struct NemytskyConditionReport {
    double tol = 0.0;
    double a1_lower_margin = 0.0; // min G0(x, ξγ) - ξγ
    double a1_upper_margin = 0.0; // min ηγ - G0(x, η)
    double a2_min_increment = 0.0;
    double a3_min_margin = 0.0;   // min of G1 and (η - G(η-u)) - G1
    double criticality = 0.0;     // max |G0(x,0)| + |G1(x,0)|
    bool eps_star_ok = true;
    long eps_star_first_bad_node = -1;
    const char* a4_note = "by construction (catalog forms are continuous in u)";

    bool a1_ok() const noexcept { return a1_lower_margin >= -tol && a1_upper_margin >= -tol; }
    bool a2_ok() const noexcept { return a2_min_increment >= -tol; }
    bool a3_ok() const noexcept { return a3_min_margin >= -tol; }
    bool passed() const noexcept {
        return a1_ok() && a2_ok() && a3_ok() && eps_star_ok && criticality == 0.0;
    }
};

NemytskyConditionReport check_nemytsky_conditions(const NemytskyForms& forms, std::size_t n_u,
                                                  double tol);

struct NemytskyOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    int threads = 1;
};

struct NemytskyReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> sup_diffs;
    bool increasing_ok = true;
    double max_decrease = 0.0;       // max_n max_i (Φ_n - Φ_{n+1})
    double max_envelope_excess = 0.0; // max_n max_i (Φ_n - (η - f*))
    double residual_inf = 0.0;
    double sandwich_lower_margin = 0.0; // min Φ - ξγ
    double sandwich_upper_margin = 0.0; // min (η - f*) - Φ
    double phi_tail = 0.0;
    double phi_integral = 0.0;
    std::vector<double> profile;
    std::vector<double> lower_envelope;
    std::vector<double> upper_envelope;
};

class NemytskyNonConvergence : public Error {
public:
    NemytskyNonConvergence(const std::string& what, NemytskyReport partial)
        : Error(ErrorKind::non_convergence, what), partial_(std::move(partial)) {}
    const NemytskyReport& partial() const noexcept { return partial_; }

private:
    NemytskyReport partial_;
};

/// Φ_{n+1}(x_i) = G0(x_i, Φ_n(x_i)) + (A G1(·, Φ_n))_i from Φ_0 = ξγ.
/// `defect` is η - f* for the converged Picard solution on the same operator
/// (SolveReport::defect); it is the upper envelope.
NemytskyReport solve_nemytsky(const NemytskyForms& forms, const OperatorMatrix& a,
                              std::span<const double> defect, const NemytskyOptions& options = {});

} // namespace halfline

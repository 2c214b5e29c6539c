#include "halfline/nemytsky.hpp"

#include "halfline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace halfline {

namespace {

constexpr double increase_noise = 1e-12;
constexpr double envelope_abort = 1e-9;

} // namespace

double LProfile::operator()(double x) const noexcept {
    if (kind == Kind::constant) {
        return value;
    }
    return 1.0 - (1.0 - value) * std::exp(-x);
}

void validate(const NemytskySpec& spec) {
    const double eta = spec.base_g.eta;
    if (!(spec.xi > 0.0 && spec.xi < 0.5 * eta)) {
        fail(ErrorKind::spec_invalid, "nemytsky.xi must lie in (0, eta/2)");
    }
    if (!(spec.eps_star_fraction >= 0.0 && spec.eps_star_fraction <= 1.0)) {
        fail(ErrorKind::spec_invalid, "nemytsky.eps_star_fraction must lie in [0, 1]");
    }
    if (!(spec.l_profile.value >= 0.0 && spec.l_profile.value <= 1.0)) {
        fail(ErrorKind::spec_invalid, "nemytsky.L.value must lie in [0, 1]");
    }
}

NemytskyForms::NemytskyForms(NemytskySpec spec, std::span<const double> nodes,
                             std::span<const double> gamma)
    : spec_(std::move(spec)), gamma_(gamma.begin(), gamma.end()) {
    validate(spec_);
    if (nodes.size() != gamma.size()) {
        fail(ErrorKind::invalid_argument, "NemytskyForms: nodes/gamma size mismatch");
    }
    for (auto& g : gamma_) {
        g = std::max(g, 0.0);
    }
    l_values_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        l_values_[i] = spec_.l_profile(nodes[i]);
    }
    eps_star_.assign(nodes.size(), 0.0);
    if (spec_.g0 == G0Family::g2) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            eps_star_[i] = spec_.eps_star_fraction * eps_star_bound(i);
        }
    }
}

NemytskyForms::NemytskyForms(NemytskySpec spec, std::span<const double> nodes,
                             std::span<const double> gamma, std::vector<double> eps_star)
    : NemytskyForms(std::move(spec), nodes, gamma) {
    if (eps_star.size() != gamma_.size()) {
        fail(ErrorKind::invalid_argument, "NemytskyForms: eps_star size mismatch");
    }
    eps_star_ = std::move(eps_star);
}

double NemytskyForms::eps_star_bound(std::size_t i) const noexcept {
    const double eta = spec_.base_g.eta;
    const double xi = spec_.xi;
    const double g = gamma_[i];
    return ((eta - 2.0 * xi) * g + xi * g * g) / (eta * (eta + xi * g));
}

void NemytskyForms::check_u(double u) const {
    if (!(u >= 0.0 && u <= spec_.base_g.eta)) {
        fail(ErrorKind::invalid_argument, "Nemytsky forms: u must lie in [0, eta]");
    }
}

double NemytskyForms::g0(std::size_t i, double u) const {
    check_u(u);
    if (u == 0.0) {
        return 0.0;
    }
    const double s = spec_.xi * gamma_[i];
    double value = 2.0 * s * u / (u + s);
    if (spec_.g0 == G0Family::g2) {
        value += eps_star_[i] * u * u;
    }
    return value;
}

double NemytskyForms::g1(std::size_t i, double u) const {
    check_u(u);
    const double envelope = eval_G_complement(spec_.base_g, u);
    return spec_.g1 == G1Family::g4 ? l_values_[i] * envelope : envelope;
}

NemytskyConditionReport check_nemytsky_conditions(const NemytskyForms& forms, std::size_t n_u,
                                                  double tol) {
    if (n_u < 3) {
        fail(ErrorKind::invalid_argument, "check_nemytsky_conditions: n_u must be >= 3");
    }
    NemytskyConditionReport r;
    r.tol = tol;
    const double eta = forms.spec().base_g.eta;
    const double xi = forms.spec().xi;
    const auto gamma = forms.gamma();
    constexpr double inf = std::numeric_limits<double>::infinity();
    r.a1_lower_margin = inf;
    r.a1_upper_margin = inf;
    r.a2_min_increment = inf;
    r.a3_min_margin = inf;

    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const double s = xi * gamma[i];
        r.a1_lower_margin = std::min(r.a1_lower_margin, forms.g0(i, s) - s);
        r.a1_upper_margin = std::min(r.a1_upper_margin, eta * gamma[i] - forms.g0(i, eta));
        r.criticality = std::max(r.criticality, std::abs(forms.g0(i, 0.0)) + std::abs(forms.g1(i, 0.0)));

        double prev0 = 0.0;
        double prev1 = 0.0;
        for (std::size_t k = 0; k < n_u; ++k) {
            const double u = (k + 1 == n_u) ? eta : eta * static_cast<double>(k) / (n_u - 1);
            const double v0 = forms.g0(i, u);
            const double v1 = forms.g1(i, u);
            if (k > 0) {
                r.a2_min_increment = std::min(r.a2_min_increment, std::min(v0 - prev0, v1 - prev1));
            }
            prev0 = v0;
            prev1 = v1;
            const double envelope = eval_G_complement(forms.spec().base_g, u);
            r.a3_min_margin = std::min(r.a3_min_margin, std::min(v1, envelope - v1));
        }

        const double e = forms.eps_star()[i];
        if (!(e >= 0.0 && e <= forms.eps_star_bound(i) * (1.0 + 1e-12)) && r.eps_star_ok) {
            r.eps_star_ok = false;
            r.eps_star_first_bad_node = static_cast<long>(i);
        }
    }
    return r;
}

NemytskyReport solve_nemytsky(const NemytskyForms& forms, const OperatorMatrix& a,
                              std::span<const double> defect, const NemytskyOptions& options) {
    const std::size_t n = a.size();
    if (defect.size() != n || forms.gamma().size() != n) {
        fail(ErrorKind::invalid_argument, "solve_nemytsky: size mismatch");
    }
    const auto gamma = forms.gamma();
    if (std::all_of(gamma.begin(), gamma.end(), [](double g) { return g <= 0.0; })) {
        fail(ErrorKind::spec_rejected, "solve_nemytsky: gamma vanishes identically (condition b)");
    }
    const double eta = forms.spec().base_g.eta;
    const double xi = forms.spec().xi;

    NemytskyReport r;
    r.lower_envelope.resize(n);
    r.upper_envelope.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.lower_envelope[i] = xi * gamma[i];
        r.upper_envelope[i] = defect[i];
    }

    std::vector<double> phi = r.lower_envelope;
    std::vector<double> g1v(n);
    std::vector<double> integral(n);
    std::vector<double> next(n);

    const auto step = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            g1v[i] = forms.g1(i, std::min(std::max(in[i], 0.0), eta));
        }
        a.apply(g1v, integral, options.threads);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = forms.g0(i, std::min(std::max(in[i], 0.0), eta)) + integral[i];
        }
    };

    for (int k = 0; k < options.max_iter; ++k) {
        step(phi, next);
        double decrease = -std::numeric_limits<double>::infinity();
        double excess = -std::numeric_limits<double>::infinity();
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            decrease = std::max(decrease, phi[i] - next[i]);
            excess = std::max(excess, next[i] - r.upper_envelope[i]);
            diff = std::max(diff, std::abs(next[i] - phi[i]));
        }
        r.max_decrease = std::max(r.max_decrease, decrease);
        r.max_envelope_excess = std::max(r.max_envelope_excess, excess);
        if (decrease > increase_noise) {
            r.increasing_ok = false;
        }
        r.sup_diffs.push_back(diff);
        r.iterations = k + 1;
        phi.swap(next);
        if (excess > envelope_abort) {
            r.profile = phi;
            fail(ErrorKind::numerical_breakdown,
                 "solve_nemytsky: iterate exceeded eta - f* by " + std::to_string(excess));
        }
        if (diff <= options.tol) {
            r.converged = true;
            break;
        }
    }
    r.profile = phi;
    if (!r.converged) {
        throw NemytskyNonConvergence("solve_nemytsky: no convergence after " +
                                         std::to_string(options.max_iter) + " iterations",
                                     std::move(r));
    }

    step(phi, next);
    double residual = 0.0;
    double lower = std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        residual = std::max(residual, std::abs(next[i] - phi[i]));
        lower = std::min(lower, phi[i] - r.lower_envelope[i]);
        upper = std::min(upper, r.upper_envelope[i] - phi[i]);
    }
    r.residual_inf = residual;
    r.sandwich_lower_margin = lower;
    r.sandwich_upper_margin = upper;
    r.phi_tail = phi.back();
    r.phi_integral = integrate(a.grid(), phi);
    return r;
}

} // namespace halfline

#include "halfline/kernels.hpp"

#include "halfline/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace halfline {

namespace {

constexpr double inv_sqrt_pi = std::numbers::inv_sqrtpi;

void require_non_negative(double x, double t) {
    if (!(x >= 0.0) || !(t >= 0.0)) {
        fail(ErrorKind::invalid_argument, "kernel arguments must be >= 0");
    }
}

} // namespace

BaseKernel BaseKernel::gaussian() {
    return BaseKernel{};
}

BaseKernel BaseKernel::exp_mixture(std::vector<ExpAtom> atoms) {
    if (atoms.empty()) {
        fail(ErrorKind::spec_invalid, "kernel.base.atoms: at least one atom required");
    }
    double mass = 0.0;
    for (const auto& a : atoms) {
        if (!(a.c > 0.0) || !(a.s > 0.0) || !std::isfinite(a.c) || !std::isfinite(a.s)) {
            fail(ErrorKind::spec_invalid, "kernel.base.atoms: each atom needs c > 0 and s > 0");
        }
        mass += 2.0 * a.c / a.s;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
        fail(ErrorKind::spec_invalid,
             "kernel.base.atoms: sum of 2c/s must equal 1 (got " + std::to_string(mass) + ")");
    }
    BaseKernel k;
    k.kind_ = BaseKind::exp_mixture;
    k.atoms_ = std::move(atoms);
    return k;
}

double BaseKernel::operator()(double x) const noexcept {
    if (kind_ == BaseKind::gaussian) {
        return std::exp(-x * x) * inv_sqrt_pi;
    }
    const double ax = std::abs(x);
    double sum = 0.0;
    for (const auto& a : atoms_) {
        sum += a.c * std::exp(-a.s * ax);
    }
    return sum;
}

double BaseKernel::tail_mass(double x) const noexcept {
    if (kind_ == BaseKind::gaussian) {
        return 0.5 * std::erfc(x);
    }
    double sum = 0.0;
    for (const auto& a : atoms_) {
        sum += a.c / a.s * std::exp(-a.s * x);
    }
    return sum;
}

double BaseKernel::decay_width() const noexcept {
    if (kind_ == BaseKind::gaussian) {
        return 8.0; // erfc(8)/2 ~ 6e-30
    }
    const double n = static_cast<double>(atoms_.size());
    double width = 0.0;
    for (const auto& a : atoms_) {
        width = std::max(width, std::log(n * a.c / (a.s * 1e-18)) / a.s);
    }
    return std::max(width, 1.0);
}

double Modulation::gap(double x) const noexcept {
    if (form == LambdaForm::exp_gap) {
        return (1.0 - d_star) * std::exp(-x);
    }
    return (1.0 - d_star) / (1.0 + x * x);
}

double Modulation::mu(double x, double t) const noexcept {
    const double lx = lambda(x);
    const double lt = lambda(t);
    return lx + lt - lx * lt;
}

double Modulation::lambda_star(double t) const noexcept {
    return 1.0 + std::exp(-t) / std::pow(t, l);
}

void validate(const KernelSpec& spec) {
    const auto& m = spec.modulation;
    if (!(m.d_star > 0.0 && m.d_star <= 1.0)) {
        fail(ErrorKind::spec_invalid, "kernel.d_star must lie in (0, 1]");
    }
    if (!(m.l > 0.0 && m.l < 1.0)) {
        fail(ErrorKind::spec_invalid, "kernel.l must lie in (0, 1)");
    }
    if (spec.family == KernelFamily::B && !(spec.delta > 0.0 && spec.delta < 1.0)) {
        fail(ErrorKind::spec_invalid, "kernel.delta must lie in (0, 1)");
    }
    if (spec.family == KernelFamily::C && !(spec.epsilon > 0.0 && spec.epsilon < 1.0)) {
        fail(ErrorKind::spec_invalid, "kernel.epsilon must lie in (0, 1)");
    }
}

double eval_base_kernel(const BaseKernel& base, double x) {
    return base(x);
}

double eval_kernel(const KernelSpec& spec, double x, double t) {
    require_non_negative(x, t);
    const auto& k0 = spec.base;
    const auto& m = spec.modulation;
    switch (spec.family) {
    case KernelFamily::A:
        return m.mu(x, t) * k0(x - t);
    case KernelFamily::B:
        return m.mu(x, t) * (k0(x - t) - spec.delta * k0(x + t));
    case KernelFamily::C:
        return 0.5 * (m.lambda(x) + m.lambda(t)) * (k0(x - t) + spec.epsilon * k0(x + t));
    }
    return 0.0;
}

double dominating_kernel(const KernelSpec& spec, double y) {
    const double k0 = spec.base(y);
    return spec.family == KernelFamily::C ? (1.0 + spec.epsilon) * k0 : k0;
}

HalfLineGrid far_field_window(const KernelSpec& spec, const HalfLineGrid& grid) {
    const double width = spec.base.decay_width();
    const int panels = std::max(1, static_cast<int>(std::ceil(width / grid.panel_width())));
    RuleSpec rule{QuadratureRule::gauss_legendre, 4};
    if (grid.rule().rule == QuadratureRule::gauss_legendre) {
        rule.points_per_panel = grid.rule().points_per_panel;
    }
    return build_interval_grid(grid.x_max(), grid.x_max() + width, panels, rule);
}

double far_field_mass(const KernelSpec& spec, const HalfLineGrid& window, double x) {
    return integrate_fn(window, [&](double t) { return eval_kernel(spec, x, t); });
}

double row_integral(const KernelSpec& spec, const HalfLineGrid& grid, const HalfLineGrid& window,
                    double x, const std::function<double(double)>& f) {
    double sum = 0.0;
    if (spec.base.smooth()) {
        const auto nodes = grid.nodes();
        const auto weights = grid.weights();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            sum += weights[j] * f(nodes[j]);
        }
    } else {
        const double h = grid.panel_width();
        const auto piece = [&](double a, double b) {
            if (!(b - a > 0.0)) {
                return;
            }
            const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
            sum += integrate_fn(build_interval_grid(a, b, panels, grid.rule()), f);
        };
        const double cut = std::min(x, grid.x_max());
        piece(0.0, cut);
        piece(cut, grid.x_max());
    }
    return sum + integrate_fn(window, f);
}

std::vector<double> row_mass_profile(const KernelSpec& spec, const HalfLineGrid& grid) {
    const auto nodes = grid.nodes();
    const auto window = far_field_window(spec, grid);
    std::vector<double> mass(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        mass[i] = row_integral(spec, grid, window, x,
                               [&](double t) { return eval_kernel(spec, x, t); });
    }
    return mass;
}

double modulation_deficit(const KernelSpec& spec, double x, double t) {
    require_non_negative(x, t);
    const auto& k0 = spec.base;
    const auto& m = spec.modulation;
    switch (spec.family) {
    case KernelFamily::A:
        return m.gap(x) * m.gap(t) * k0(x - t);
    case KernelFamily::B:
        return m.gap(x) * m.gap(t) * (k0(x - t) - spec.delta * k0(x + t));
    case KernelFamily::C:
        return 0.5 * (m.gap(x) + m.gap(t)) * (k0(x - t) + spec.epsilon * k0(x + t));
    }
    return 0.0;
}

double tail_coefficient(const KernelSpec& spec) noexcept {
    switch (spec.family) {
    case KernelFamily::A:
        return 1.0;
    case KernelFamily::B:
        return 1.0 + spec.delta;
    case KernelFamily::C:
        return 1.0 - spec.epsilon;
    }
    return 1.0;
}

std::vector<double> gamma_profile(const KernelSpec& spec, const HalfLineGrid& grid) {
    const auto nodes = grid.nodes();
    const auto window = far_field_window(spec, grid);
    const double c = tail_coefficient(spec);
    std::vector<double> gamma(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        gamma[i] = c * spec.base.tail_mass(x) +
                   row_integral(spec, grid, window, x,
                                [&](double t) { return modulation_deficit(spec, x, t); });
    }
    return gamma;
}

std::vector<double> gamma_direct(const KernelSpec& spec, const HalfLineGrid& grid) {
    auto gamma = row_mass_profile(spec, grid);
    for (auto& g : gamma) {
        g = 1.0 - g;
    }
    return gamma;
}

double lambda_star_excess_integral(double l) {
    if (!(l > 0.0 && l < 1.0)) {
        fail(ErrorKind::invalid_argument, "lambda_star_excess_integral: l must lie in (0, 1)");
    }
    const RuleSpec rule{QuadratureRule::gauss_legendre, 8};
    // [0, 1]: t = u^q with q(1-l) = 4 leaves the smooth integrand q u³ e^{-u^q}.
    const double q = 4.0 / (1.0 - l);
    const auto near = build_interval_grid(0.0, 1.0, 64, rule);
    const double head = integrate_fn(near, [&](double u) {
        return q * u * u * u * std::exp(-std::pow(u, q));
    });
    const auto far = build_interval_grid(1.0, 64.0, 512, rule);
    const double tail = integrate_fn(far, [&](double t) { return std::exp(-t) / std::pow(t, l); });
    return head + tail;
}

KernelConstants kernel_constants(const KernelSpec& spec, const HalfLineGrid& grid,
                                 std::span<const double> gamma) {
    KernelConstants c;
    c.gamma_integral = integrate(grid, gamma);
    c.lambda_star_excess = lambda_star_excess_integral(spec.modulation.l);
    const auto half_line = build_interval_grid(0.0, 4.0 * spec.base.decay_width(), 800,
                                               RuleSpec{QuadratureRule::gauss_legendre, 8});
    c.dominating_mass = 2.0 * integrate_fn(half_line, [&](double y) {
        return dominating_kernel(spec, y);
    });
    c.dominating_first_moment = 2.0 * integrate_fn(half_line, [&](double y) {
        return y * dominating_kernel(spec, y);
    });
    return c;
}

void assess_gamma(std::span<const double> gamma, ConditionReport& report) {
    if (gamma.empty()) {
        return;
    }
    const auto [lo, hi] = std::minmax_element(gamma.begin(), gamma.end());
    report.gamma_min = *lo;
    report.gamma_max = *hi;
    report.gamma_tail = gamma.back();
}

std::vector<std::size_t> probe_indices(std::size_t n_nodes, std::size_t probe_count) {
    std::vector<std::size_t> idx;
    if (n_nodes == 0) {
        return idx;
    }
    if (probe_count >= n_nodes || probe_count < 2) {
        probe_count = std::min(std::max<std::size_t>(probe_count, 2), n_nodes);
    }
    if (probe_count == 1 || n_nodes == 1) {
        idx.push_back(0);
        return idx;
    }
    for (std::size_t k = 0; k < probe_count; ++k) {
        const std::size_t i = (k * (n_nodes - 1) + (probe_count - 1) / 2) / (probe_count - 1);
        if (idx.empty() || idx.back() != i) {
            idx.push_back(i);
        }
    }
    return idx;
}

ConditionReport check_kernel_conditions(const KernelSpec& spec, const HalfLineGrid& grid,
                                        std::size_t probe_count, double tol) {
    validate(spec);
    if (probe_count < 2) {
        fail(ErrorKind::invalid_argument, "check_kernel_conditions: probe_count must be >= 2");
    }
    ConditionReport r;
    r.tol = tol;

    const auto mass = row_mass_profile(spec, grid);
    const auto gamma = gamma_profile(spec, grid);
    for (std::size_t i = 0; i < mass.size(); ++i) {
        r.gamma_route_gap = std::max(r.gamma_route_gap, std::abs(gamma[i] - (1.0 - mass[i])));
    }
    r.sup_row_mass = *std::max_element(mass.begin(), mass.end());
    r.row_mass_tail = mass.back();
    assess_gamma(gamma, r);
    const double x_last = grid.nodes().back();
    r.gamma_tail_bound = spec.base.tail_mass(x_last) + spec.modulation.gap(x_last);

    const auto nodes = grid.nodes();
    const auto idx = probe_indices(nodes.size(), probe_count);
    std::size_t violations = 0;
    double min_value = std::numeric_limits<double>::infinity();
    double sym = 0.0;
    double dom = std::numeric_limits<double>::infinity();
    for (const auto i : idx) {
        for (const auto j : idx) {
            const double x = nodes[i];
            const double t = nodes[j];
            const double k = eval_kernel(spec, x, t);
            ++r.positivity_probes;
            if (spec.base(x - t) < DBL_MIN) {
                ++r.positivity_unresolved;
            } else {
                if (!(k > 0.0)) {
                    ++violations;
                }
                min_value = std::min(min_value, k);
            }
            sym = std::max(sym, std::abs(k - eval_kernel(spec, t, x)));
            if (t > 0.0) {
                const double bound =
                    spec.modulation.lambda_star(t) * dominating_kernel(spec, x - t);
                dom = std::min(dom, bound - k);
            }
        }
    }
    r.positivity_ok = violations == 0 && r.positivity_probes > r.positivity_unresolved;
    r.min_probe_value = std::isfinite(min_value) ? min_value : 0.0;
    r.symmetry_residual = sym;
    r.domination_margin = std::isfinite(dom) ? dom : 0.0;
    r.constants = kernel_constants(spec, grid, gamma);
    return r;
}

} // namespace halfline

#include "halfline/nonlinearity.hpp"

#include "halfline/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace halfline {

namespace {

bool in_open_unit(double a) {
    return a > 0.0 && a < 1.0;
}

double g_raw(const NonlinearitySpec& s, double u) {
    switch (s.family) {
    case GFamily::I:
        return std::pow(u, s.alpha);
    case GFamily::II:
        return 0.5 * (std::pow(u, s.alpha_star) + u);
    case GFamily::III:
        return 0.5 * (std::pow(u, s.alpha_tilde) + std::pow(u, s.alpha_star));
    }
    return 0.0;
}

} // namespace

double condition4_alpha(const NonlinearitySpec& spec) {
    switch (spec.family) {
    case GFamily::I:
        return spec.alpha;
    case GFamily::II:
        return 0.5 * (1.0 + spec.alpha_star);
    case GFamily::III:
        return 0.5 * (spec.alpha_tilde + spec.alpha_star);
    }
    return 0.0;
}

NonlinearitySpec make_nonlinearity(GFamily family, double alpha, double alpha_star,
                                   double alpha_tilde) {
    NonlinearitySpec s;
    s.family = family;
    s.alpha = alpha;
    s.alpha_star = alpha_star;
    s.alpha_tilde = alpha_tilde;
    switch (family) {
    case GFamily::I:
        if (!in_open_unit(alpha)) {
            fail(ErrorKind::spec_invalid, "nonlinearity.alpha must lie in (0, 1)");
        }
        break;
    case GFamily::II:
        if (!in_open_unit(alpha_star)) {
            fail(ErrorKind::spec_invalid, "nonlinearity.alpha_star must lie in (0, 1)");
        }
        break;
    case GFamily::III:
        if (!in_open_unit(alpha_star)) {
            fail(ErrorKind::spec_invalid, "nonlinearity.alpha_star must lie in (0, 1)");
        }
        if (!in_open_unit(alpha_tilde)) {
            fail(ErrorKind::spec_invalid, "nonlinearity.alpha_tilde must lie in (0, 1)");
        }
        if (!(alpha_tilde < alpha_star)) {
            fail(ErrorKind::spec_invalid, "nonlinearity.alpha_tilde must be < alpha_star");
        }
        break;
    }
    s.cond4_alpha = condition4_alpha(s);
    // Every catalog family fixes u = 1; bisection must agree.
    const double eta = find_eta(s);
    if (std::abs(eta - 1.0) > 1e-12) {
        fail(ErrorKind::spec_invalid, "nonlinearity: fixed point is not 1 (got " +
                                          std::to_string(eta) + ")");
    }
    s.eta = 1.0;
    return s;
}

double eval_G(const NonlinearitySpec& spec, double u) {
    if (!(u >= 0.0)) {
        fail(ErrorKind::invalid_argument, "G: argument must be >= 0");
    }
    return g_raw(spec, u);
}

double eval_G_complement(const NonlinearitySpec& spec, double d) {
    if (!(d >= 0.0 && d <= spec.eta)) {
        fail(ErrorKind::domain_violation, "eval_G_complement: d outside [0, eta]");
    }
    const double eta = spec.eta;
    const double l = std::log1p(-d / eta);
    // η - η(1 - d/η)^p = -η expm1(p log1p(-d/η))
    const auto drop = [&](double p) { return -eta * std::expm1(p * l); };
    switch (spec.family) {
    case GFamily::I:
        return drop(spec.alpha);
    case GFamily::II:
        return 0.5 * (drop(spec.alpha_star) + d);
    case GFamily::III:
        return 0.5 * (drop(spec.alpha_tilde) + drop(spec.alpha_star));
    }
    return 0.0;
}

double find_eta(const NonlinearitySpec& spec) {
    double lo = 1e-8;
    double hi = 10.0;
    const auto h = [&](double u) { return g_raw(spec, u) - u; };
    if (!(h(lo) > 0.0 && h(hi) < 0.0)) {
        fail(ErrorKind::spec_invalid, "find_eta: G(u) - u has no sign change on [1e-8, 10]");
    }
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double eval_Q(const NonlinearitySpec& spec, double v) {
    if (!(v >= 0.0 && v <= spec.eta)) {
        fail(ErrorKind::invalid_argument, "Q: argument must lie in [0, eta]");
    }
    if (v == 0.0) {
        return 0.0;
    }
    if (v == spec.eta) {
        return spec.eta;
    }
    if (spec.family == GFamily::I) {
        return std::pow(v, 1.0 / spec.alpha);
    }
    // G is increasing, so the root of G(u) = v lies in [0, η]. Shrink the
    // bracket until the endpoints are adjacent doubles.
    double lo = 0.0;
    double hi = spec.eta;
    for (int it = 0; it < 2200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (g_raw(spec, mid) < v ? lo : hi) = mid;
    }
    return std::abs(g_raw(spec, lo) - v) < std::abs(g_raw(spec, hi) - v) ? lo : hi;
}

double inequality69_ratio(double alpha_star, double alpha, double sigma) {
    const double sa = std::pow(sigma, alpha);
    return (std::pow(sigma, alpha_star) - sa) / (sa - sigma);
}

GConditionReport check_G_conditions(const NonlinearitySpec& spec, std::size_t n_u,
                                    std::size_t n_sigma, double tol) {
    if (n_u < 3 || n_sigma < 3) {
        fail(ErrorKind::invalid_argument, "check_G_conditions: lattice sizes must be >= 3");
    }
    GConditionReport r;
    r.tol = tol;
    const double eta = spec.eta;

    std::vector<double> u(n_u);
    std::vector<double> g(n_u);
    for (std::size_t k = 0; k < n_u; ++k) {
        u[k] = (k + 1 == n_u) ? eta : eta * static_cast<double>(k) / (n_u - 1);
        g[k] = eval_G(spec, u[k]);
    }
    r.min_increment = std::numeric_limits<double>::infinity();
    r.max_second_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n_u; ++k) {
        r.min_increment = std::min(r.min_increment, g[k] - g[k - 1]);
        if (k + 1 < n_u) {
            r.max_second_difference =
                std::max(r.max_second_difference, g[k + 1] - 2.0 * g[k] + g[k - 1]);
        }
    }
    r.g_at_zero = eval_G(spec, 0.0);
    r.fixed_point_residual = std::abs(eval_G(spec, eta) - eta);

    const double a = spec.cond4_alpha;
    r.condition4_min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= n_sigma; ++i) {
        const double sigma = static_cast<double>(i) / (n_sigma + 1);
        const double sa = std::pow(sigma, a);
        for (std::size_t k = 0; k < n_u; ++k) {
            const double margin = eval_G(spec, sigma * u[k]) - sa * g[k];
            r.condition4_min_margin = std::min(r.condition4_min_margin, margin);
            r.condition4_max_deviation = std::max(r.condition4_max_deviation, std::abs(margin));
            if (margin < -tol) {
                ++r.condition4_violations;
            }
        }
    }

    // uQ(v) >= Q(uv) on u ∈ [0,1], v ∈ [0,η].
    std::vector<double> q(n_u);
    for (std::size_t k = 0; k < n_u; ++k) {
        q[k] = eval_Q(spec, u[k]);
    }
    r.eq55_min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_sigma; ++i) {
        const double s = static_cast<double>(i) / (n_sigma - 1);
        for (std::size_t k = 0; k < n_u; ++k) {
            const double margin = s * q[k] - eval_Q(spec, std::min(s * u[k], eta));
            r.eq55_min_margin = std::min(r.eq55_min_margin, margin);
            if (margin < -tol) {
                ++r.eq55_violations;
            }
        }
    }

    r.q_min_second_difference = std::numeric_limits<double>::infinity();
    r.q_below_identity = true;
    for (std::size_t k = 0; k < n_u; ++k) {
        r.q_round_trip_error = std::max(r.q_round_trip_error, std::abs(eval_Q(spec, g[k]) - u[k]));
        if (k > 0 && k + 1 < n_u) {
            r.q_min_second_difference =
                std::min(r.q_min_second_difference, q[k + 1] - 2.0 * q[k] + q[k - 1]);
            if (!(q[k] < u[k])) {
                r.q_below_identity = false;
            }
        }
    }
    return r;
}

} // namespace halfline

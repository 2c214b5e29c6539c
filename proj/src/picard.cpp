#include "halfline/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace halfline {

namespace {

constexpr double monotone_noise = 1e-12;
constexpr double monotone_abort = 1e-9;
constexpr double domain_slack = 1e-9;

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace

std::vector<double> apply_hammerstein(const OperatorMatrix& a, const NonlinearitySpec& g,
                                      std::span<const double> f, int threads) {
    if (f.size() != a.size()) {
        fail(ErrorKind::invalid_argument, "apply_hammerstein: profile size mismatch");
    }
    std::vector<double> gf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double u = f[i];
        if (!(u >= -domain_slack && u <= g.eta + domain_slack)) {
            fail(ErrorKind::domain_violation,
                 "apply_hammerstein: f[" + std::to_string(i) + "] = " + std::to_string(u) +
                     " outside [0, eta]");
        }
        gf[i] = eval_G(g, std::max(u, 0.0));
    }
    std::vector<double> out(f.size());
    a.apply(gf, out, threads);
    return out;
}

std::vector<double> apply_hammerstein_defect(const OperatorMatrix& a, const NonlinearitySpec& g,
                                             std::span<const double> d, int threads) {
    if (d.size() != a.size()) {
        fail(ErrorKind::invalid_argument, "apply_hammerstein_defect: profile size mismatch");
    }
    std::vector<double> gd(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = d[i];
        if (!(v >= -domain_slack && v <= g.eta + domain_slack)) {
            fail(ErrorKind::domain_violation,
                 "apply_hammerstein_defect: d[" + std::to_string(i) + "] = " + std::to_string(v) +
                     " outside [0, eta]");
        }
        gd[i] = eval_G_complement(g, std::clamp(v, 0.0, g.eta));
    }
    std::vector<double> out(d.size());
    a.apply(gd, out, threads);
    const auto gamma = a.gamma();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += g.eta * gamma[i];
    }
    return out;
}

double estimate_sigma0(std::span<const double> f1, std::span<const double> f2) {
    if (f1.size() != f2.size() || f1.empty()) {
        fail(ErrorKind::invalid_argument, "estimate_sigma0: size mismatch");
    }
    double sigma = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f1.size(); ++i) {
        if (!(f1[i] > 0.0)) {
            fail(ErrorKind::numerical_breakdown,
                 "estimate_sigma0: f1[" + std::to_string(i) + "] is not positive");
        }
        sigma = std::min(sigma, f2[i] / f1[i]);
    }
    if (!(sigma > 0.0)) {
        fail(ErrorKind::numerical_breakdown, "estimate_sigma0: f2 vanished");
    }
    return std::min(sigma, 1.0);
}

SolveReport solve_picard(const OperatorMatrix& a, const NonlinearitySpec& g,
                         const PicardOptions& options) {
    if (!(options.tol > 0.0)) {
        fail(ErrorKind::invalid_argument, "solve_picard: tol must be > 0");
    }
    SolveReport r;
    r.eta = g.eta;
    r.cond4_alpha = g.cond4_alpha;
    r.sigma0 = 1.0;

    const std::size_t n = a.size();
    std::vector<double> d(n, 0.0);
    std::vector<double> f(n, g.eta);
    std::vector<double> f1;
    if (options.keep_iterates > 0) {
        r.iterates.push_back(f);
    }
    const auto to_profile = [&](std::span<const double> defect) {
        std::vector<double> out(defect.size());
        for (std::size_t i = 0; i < defect.size(); ++i) {
            out[i] = g.eta - defect[i];
        }
        return out;
    };

    for (int k = 0; k < options.max_iter; ++k) {
        auto next_d = apply_hammerstein_defect(a, g, d, options.threads);
        // f_{n+1} - f_n = d_n - d_{n+1}
        double increase = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            increase = std::max(increase, d[i] - next_d[i]);
        }
        r.max_monotone_increase = std::max(r.max_monotone_increase, increase);
        if (increase > monotone_noise) {
            r.monotone_ok = false;
        }
        const double diff = sup_diff(d, next_d);
        r.sup_diffs.push_back(diff);
        r.iterations = k + 1;
        auto next = to_profile(next_d);
        if (k == 0) {
            f1 = next;
        } else if (k == 1) {
            r.sigma0 = estimate_sigma0(f1, next);
            r.b_tail = next.back() / f1.back();
        }
        if (r.iterates.size() < options.keep_iterates) {
            r.iterates.push_back(next);
        }
        d.swap(next_d);
        f.swap(next);
        if (increase > monotone_abort) {
            r.profile = f;
            r.defect = d;
            fail(ErrorKind::numerical_breakdown,
                 "solve_picard: iterate increased by " + std::to_string(increase) +
                     " at step " + std::to_string(k + 1));
        }
        if (diff <= options.tol && k >= 1) {
            r.converged = true;
            break;
        }
    }

    r.profile = f;
    r.defect = d;
    if (!r.converged) {
        throw PicardNonConvergence("solve_picard: no convergence after " +
                                       std::to_string(options.max_iter) + " iterations",
                                   std::move(r));
    }

    const auto image = apply_hammerstein(a, g, r.profile, options.threads);
    r.residual_inf = sup_diff(r.profile, image);
    r.interior_ok = std::all_of(r.defect.begin(), r.defect.end(),
                                [&](double v) { return v > 0.0 && v < g.eta; });
    try {
        r.rate_bound_ok = verify_rate_bound(r, g.cond4_alpha);
    } catch (const Error&) {
        r.rate_bound_ok = false;
    }
    return r;
}

std::vector<double> rate_envelope(const SolveReport& report, double cond4_alpha) {
    std::vector<double> env(report.sup_diffs.size(), std::numeric_limits<double>::quiet_NaN());
    const double log_term = std::log(1.0 / report.sigma0);
    for (std::size_t n = 1; n < env.size(); ++n) {
        env[n] = report.eta * std::pow(cond4_alpha, static_cast<double>(n - 1)) * log_term;
    }
    return env;
}

bool verify_rate_bound(const SolveReport& report, double cond4_alpha) {
    if (report.sigma0 >= 1.0) {
        for (std::size_t n = 1; n < report.sup_diffs.size(); ++n) {
            if (report.sup_diffs[n] != 0.0) {
                fail(ErrorKind::inconsistent_report,
                     "verify_rate_bound: sigma0 = 1 but iterates still move");
            }
        }
        return true;
    }
    const auto env = rate_envelope(report, cond4_alpha);
    for (std::size_t n = 1; n < report.sup_diffs.size(); ++n) {
        if (report.sup_diffs[n] > env[n] + 1e-12) {
            return false;
        }
    }
    return true;
}

double squeeze_violation(std::span<const std::vector<double>> iterates, double sigma0,
                         double cond4_alpha) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n + 1 < iterates.size(); ++n) {
        const double factor = std::pow(sigma0, std::pow(cond4_alpha, static_cast<double>(n - 1)));
        const auto& fn = iterates[n];
        const auto& fn1 = iterates[n + 1];
        for (std::size_t i = 0; i < fn.size(); ++i) {
            worst = std::max(worst, factor * fn[i] - fn1[i]);
            worst = std::max(worst, fn1[i] - fn[i]);
        }
    }
    return worst;
}

RestartResult iterate_from(const OperatorMatrix& a, const NonlinearitySpec& g,
                           std::vector<double> f0, double tol, int max_iter, int threads) {
    RestartResult r;
    r.profile = std::move(f0);
    for (int k = 0; k < max_iter; ++k) {
        auto next = apply_hammerstein(a, g, r.profile, threads);
        r.last_diff = sup_diff(r.profile, next);
        r.profile.swap(next);
        r.iterations = k + 1;
        if (r.last_diff <= tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

double nystrom_interpolate(const KernelSpec& spec, const HalfLineGrid& grid,
                           const HalfLineGrid& window, std::span<const double> g_of_profile,
                           double x) {
    if (g_of_profile.size() != grid.size() || g_of_profile.empty()) {
        fail(ErrorKind::invalid_argument, "nystrom_interpolate: profile size mismatch");
    }
    const auto nodes = grid.nodes();
    const auto w = grid.weights();
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        sum += w[j] * eval_kernel(spec, x, nodes[j]) * g_of_profile[j];
    }
    return sum + far_field_mass(spec, window, x) * g_of_profile.back();
}

} // namespace halfline

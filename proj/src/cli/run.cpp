#include "halfline/cli/run.hpp"

#include "halfline/analysis.hpp"
#include "halfline/cli/config.hpp"
#include "halfline/cli/report.hpp"
#include "halfline/operator.hpp"
#include "halfline/simd/matvec.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace halfline::cli {

namespace {

constexpr double kernel_check_tol = 1e-10;
constexpr std::size_t kernel_probes = 32;
constexpr double g_check_tol = 1e-12;
constexpr std::size_t lattice = 200;
constexpr double sandwich_tol = 1e-10;
constexpr double phi_tail_bound = 1e-6;

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

/// Accumulates the report and the list of failed checks for one run.
struct Session {
    Session(const RunOptions& o, std::ostream& os, std::ostream& es)
        : options(o), out(os), err(es) {}

    const RunOptions& options;
    std::ostream& out;
    std::ostream& err;
    std::string started = timestamp();
    Json report;
    std::vector<std::string> failed;

    void check(bool ok, const std::string& name) {
        if (!ok) {
            failed.push_back(name);
        }
    }

    int finish(int code) {
        report["status"] = {{"exit_code", code}, {"failed", failed}};
        std::filesystem::create_directories(options.out_dir);
        write_json(options.out_dir / "report.json", report);
        Json meta;
        meta["command"] = options.command;
        meta["config_path"] = options.config.string();
        meta["threads"] = options.threads;
        meta["simd_variant"] = simd::to_string(simd::active_variant());
        meta["started"] = started;
        meta["finished"] = timestamp();
        write_json(options.out_dir / "run_meta.json", meta);
        if (!failed.empty()) {
            std::string list;
            for (const auto& f : failed) {
                list += list.empty() ? "" : ", ";
                list += f;
            }
            err << "failed: " << list << '\n';
        }
        out << options.command << ": exit " << code << '\n';
        return code;
    }
};

Json certificate_entry(bool enabled) {
    return Json{{"enabled", enabled}};
}

void run_certificates(Session& s, const RunConfig& cfg, const OperatorMatrix& a,
                      const ConditionReport& kc, const SolveReport& solve) {
    const auto& flags = cfg.certificates;
    const auto& g = cfg.nonlinearity;
    const auto& grid = a.grid();
    Json certs;

    certs["rate_bound"] = {{"enabled", true}, {"passed", solve.rate_bound_ok}};
    s.check(solve.rate_bound_ok, "certificates.rate_bound");

    auto lemma2 = certificate_entry(flags.lemma2);
    if (flags.lemma2) {
        try {
            const auto c = lemma2_certificate(solve.profile, kc.constants, g, grid,
                                              kc.symmetry_residual);
            lemma2["lhs"] = c.lhs;
            lemma2["rhs"] = c.rhs;
            lemma2["lhs_positive"] = c.lhs > 0.0;
            lemma2["passed"] = c.passed && c.lhs > 0.0;
            s.check(c.passed && c.lhs > 0.0, "certificates.lemma2");
        } catch (const Error& e) {
            lemma2["skipped"] = e.what();
        }
    }
    certs["lemma2"] = lemma2;

    auto lemma3 = certificate_entry(flags.lemma3);
    if (flags.lemma3) {
        try {
            const auto c = lemma3_certificate(solve.profile, grid, g, kc.constants);
            lemma3["lhs"] = c.lhs;
            lemma3["rhs"] = std::isfinite(c.rhs) ? Json(c.rhs) : Json(nullptr);
            lemma3["r"] = c.r;
            lemma3["epsilon"] = c.epsilon;
            lemma3["degenerate"] = c.degenerate;
            lemma3["passed"] = c.passed;
            s.check(c.passed, "certificates.lemma3");
        } catch (const Error& e) {
            lemma3["skipped"] = e.what();
            lemma3["passed"] = false;
            s.check(false, "certificates.lemma3");
        }
    }
    certs["lemma3"] = lemma3;

    auto asymptote = certificate_entry(flags.asymptote);
    if (flags.asymptote) {
        CertificateBundle b;
        b.asymptote_gap = solve.defect.back();
        b.asymptote_bound = std::max(5.0 * g.eta * a.gamma().back(), 1e-6);
        asymptote["gap"] = b.asymptote_gap;
        asymptote["bound"] = b.asymptote_bound;
        asymptote["passed"] = b.asymptote_ok();
        s.check(b.asymptote_ok(), "certificates.asymptote");
    }
    certs["asymptote"] = asymptote;

    auto jensen = certificate_entry(flags.jensen);
    if (flags.jensen) {
        std::vector<double> values(solve.profile.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = eval_G(g, solve.profile[i]);
        }
        CertificateBundle b;
        b.jensen_min_margin = jensen_certificate(a, g, values, s.options.threads);
        jensen["min_margin"] = b.jensen_min_margin;
        jensen["passed"] = b.jensen_ok();
        s.check(b.jensen_ok(), "certificates.jensen");
    }
    certs["jensen"] = jensen;

    auto uniqueness = certificate_entry(flags.uniqueness);
    if (flags.uniqueness) {
        UniquenessOptions u;
        u.perturbation_scale = flags.perturbation_scale;
        u.trials = flags.probe_trials;
        u.tol = cfg.solver.tol;
        u.max_iter = cfg.solver.max_iter;
        u.seed = flags.seed;
        u.threads = s.options.threads;
        try {
            const auto p = uniqueness_probe(a, g, solve.profile, u);
            uniqueness["deviations"] = p.deviations;
            uniqueness["max_deviation"] = p.max_deviation;
            uniqueness["threshold"] = p.threshold;
            uniqueness["inconclusive"] = p.inconclusive;
            uniqueness["passed"] = p.passed;
            s.check(p.passed, "certificates.uniqueness");
        } catch (const Error& e) {
            uniqueness["skipped"] = e.what();
        }
    }
    certs["uniqueness"] = uniqueness;

    s.report["certificates"] = certs;
}

int pipeline(Session& s, RunConfig cfg) {
    const auto& opt = s.options;
    if (opt.seed) {
        cfg.certificates.seed = *opt.seed;
    }
    const bool with_nemytsky = opt.command == "solve-nemytsky";
    if (with_nemytsky && !cfg.nemytsky) {
        throw ConfigError("nemytsky", "block required for solve-nemytsky");
    }
    s.report["tool"] = {{"name", "halfline"}, {"version", tool_version}};
    s.report["command"] = opt.command;
    s.report["config"] = to_json(cfg);

    const auto grid = build_grid(cfg.grid.x_max, cfg.grid.n_panels, cfg.grid.rule);
    const auto kc = check_kernel_conditions(cfg.kernel, grid, kernel_probes, kernel_check_tol);
    const auto gc = check_G_conditions(cfg.nonlinearity, lattice, lattice, g_check_tol);
    Json conditions;
    conditions["kernel"] = to_json(kc);
    conditions["nonlinearity"] = to_json(gc);
    s.check(kc.passed(), "conditions.kernel");
    s.check(gc.passed(), "conditions.nonlinearity");

    const auto gamma = gamma_profile(cfg.kernel, grid);
    std::optional<NemytskyForms> forms;
    if (with_nemytsky || (opt.command == "check" && cfg.nemytsky)) {
        forms.emplace(*cfg.nemytsky, grid.nodes(), gamma);
        const auto nc = check_nemytsky_conditions(*forms, lattice, g_check_tol);
        conditions["nemytsky"] = to_json(nc);
        s.check(nc.passed(), "conditions.nemytsky");
    }
    s.report["conditions"] = conditions;
    if (!s.failed.empty()) {
        return s.finish(exit_check_failed);
    }
    if (opt.command == "check") {
        return s.finish(exit_ok);
    }

    const auto a = assemble_operator_unchecked(cfg.kernel, grid, opt.threads);
    PicardOptions po;
    po.tol = cfg.solver.tol;
    po.max_iter = cfg.solver.max_iter;
    po.threads = opt.threads;
    SolveReport solve;
    try {
        solve = solve_picard(a, cfg.nonlinearity, po);
    } catch (const PicardNonConvergence& e) {
        s.report["solve"] = to_json(e.partial());
        s.err << e.what() << '\n';
        s.check(false, "solve.converged");
        return s.finish(exit_no_convergence);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::numerical_breakdown) {
            throw;
        }
        s.err << e.what() << '\n';
        s.check(false, "solve.monotone");
        return s.finish(exit_no_convergence);
    }
    s.report["solve"] = to_json(solve);
    s.check(solve.monotone_ok, "solve.monotone");
    s.check(solve.interior_ok, "solve.interior");
    s.check(solve.residual_inf <= 2.0 * cfg.solver.tol, "solve.residual");
    s.out << fmt::format("picard: {} iterations, sigma0 = {}, residual = {}\n", solve.iterations,
                         solve.sigma0, solve.residual_inf);

    run_certificates(s, cfg, a, kc, solve);

    std::optional<NemytskyReport> nem;
    if (with_nemytsky) {
        NemytskyOptions no;
        no.tol = cfg.solver.tol;
        no.max_iter = cfg.solver.max_iter;
        no.threads = opt.threads;
        // The operator's γ is the one the Picard defect iteration used.
        NemytskyForms solver_forms(*cfg.nemytsky, grid.nodes(), a.gamma());
        try {
            nem = solve_nemytsky(solver_forms, a, solve.defect, no);
        } catch (const NemytskyNonConvergence& e) {
            s.report["nemytsky"] = to_json(e.partial());
            s.err << e.what() << '\n';
            s.check(false, "nemytsky.converged");
            return s.finish(exit_no_convergence);
        }
        Json nj = to_json(*nem);
        const bool sandwich = nem->sandwich_lower_margin >= -sandwich_tol &&
                              nem->sandwich_upper_margin >= -sandwich_tol &&
                              nem->phi_tail <= phi_tail_bound && nem->increasing_ok;
        nj["sandwich_ok"] = sandwich;
        s.report["nemytsky"] = nj;
        s.check(sandwich, "nemytsky.sandwich");
        s.out << fmt::format("nemytsky: {} iterations, phi(x_max) = {}\n", nem->iterations,
                             nem->phi_tail);
    }

    std::filesystem::create_directories(opt.out_dir);
    write_profile(opt.out_dir / "profile.csv", grid.nodes(), a.gamma(), solve,
                  nem ? &*nem : nullptr);
    return s.finish(s.failed.empty() ? exit_ok : exit_check_failed);
}

int table(const RunOptions& opt, std::ostream& out) {
    std::ifstream in(opt.report);
    if (!in) {
        throw ConfigError("", "cannot read report file " + opt.report.string());
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("malformed report: ") + e.what());
    }
    if (!doc.contains("solve")) {
        throw ConfigError("solve", "report has no solve section");
    }
    const auto text = emit_convergence_table(solve_report_from_json(doc.at("solve")));
    out << text;
    if (!opt.out_dir.empty() && opt.out_dir != ".") {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream file(opt.out_dir / "convergence_table.csv", std::ios::binary);
        file << text;
    }
    return exit_ok;
}

} // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (options.command == "table") {
            return table(options, out);
        }
        if (options.command != "check" && options.command != "solve" &&
            options.command != "solve-nemytsky") {
            err << "unknown command: " << options.command << '\n';
            return exit_config;
        }
        if (options.threads < 1) {
            err << "--threads must be >= 1\n";
            return exit_config;
        }
        auto cfg = load_config(options.config);
        Session session(options, out, err);
        return pipeline(session, std::move(cfg));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        err << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_internal;
    }
}

} // namespace halfline::cli

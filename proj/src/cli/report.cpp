#include "halfline/cli/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>

namespace halfline::cli {

namespace {

/// NaN and infinities become null; JSON has no spelling for them.
Json number(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json numbers(std::span<const double> values) {
    Json out = Json::array();
    for (double v : values) {
        out.push_back(number(v));
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error(ErrorKind::invalid_argument, "cannot write " + path.string());
    }
}

} // namespace

Json to_json(const ConditionReport& r) {
    Json j;
    j["tol"] = r.tol;
    j["passed"] = r.passed();
    j["positivity"] = {{"ok", r.positivity_ok},
                       {"probes", r.positivity_probes},
                       {"unresolved", r.positivity_unresolved},
                       {"min_probe_value", number(r.min_probe_value)}};
    j["row_mass"] = {{"ok", r.row_mass_ok()},
                     {"sup", number(r.sup_row_mass)},
                     {"tail", number(r.row_mass_tail)}};
    j["gamma"] = {{"nonnegative_ok", r.gamma_nonnegative_ok()},
                  {"nontrivial_ok", r.gamma_nontrivial_ok()},
                  {"tail_ok", r.gamma_tail_ok()},
                  {"routes_ok", r.gamma_routes_ok()},
                  {"min", number(r.gamma_min)},
                  {"max", number(r.gamma_max)},
                  {"tail", number(r.gamma_tail)},
                  {"tail_bound", number(r.gamma_tail_bound)},
                  {"route_gap", number(r.gamma_route_gap)}};
    j["symmetry"] = {{"ok", r.symmetry_ok()}, {"residual", number(r.symmetry_residual)}};
    j["domination"] = {{"ok", r.domination_ok()}, {"margin", number(r.domination_margin)}};
    const auto& c = r.constants;
    j["constants"] = {{"gamma_integral", number(c.gamma_integral)},
                      {"lambda_star_excess", number(c.lambda_star_excess)},
                      {"dominating_mass", number(c.dominating_mass)},
                      {"dominating_first_moment", number(c.dominating_first_moment)},
                      {"bracket", number(c.bracket())}};
    return j;
}

Json to_json(const GConditionReport& r) {
    Json j;
    j["tol"] = r.tol;
    j["passed"] = r.passed();
    j["increasing"] = {{"ok", r.increasing_ok()}, {"min_increment", number(r.min_increment)}};
    j["concave"] = {{"ok", r.concave_ok()},
                    {"max_second_difference", number(r.max_second_difference)}};
    j["fixed_points"] = {{"ok", r.fixed_point_ok()},
                         {"g_at_zero", number(r.g_at_zero)},
                         {"eta_residual", number(r.fixed_point_residual)}};
    j["condition4"] = {{"ok", r.condition4_ok()},
                       {"min_margin", number(r.condition4_min_margin)},
                       {"max_deviation", number(r.condition4_max_deviation)},
                       {"violations", r.condition4_violations}};
    j["inverse_submultiplicative"] = {{"ok", r.eq55_ok()},
                                      {"min_margin", number(r.eq55_min_margin)},
                                      {"violations", r.eq55_violations}};
    j["inverse"] = {{"round_trip_error", number(r.q_round_trip_error)},
                    {"convex_ok", r.q_convex_ok()},
                    {"min_second_difference", number(r.q_min_second_difference)},
                    {"below_identity", r.q_below_identity}};
    return j;
}

Json to_json(const NemytskyConditionReport& r) {
    Json j;
    j["tol"] = r.tol;
    j["passed"] = r.passed();
    j["a1"] = {{"ok", r.a1_ok()},
               {"lower_margin", number(r.a1_lower_margin)},
               {"upper_margin", number(r.a1_upper_margin)}};
    j["a2"] = {{"ok", r.a2_ok()}, {"min_increment", number(r.a2_min_increment)}};
    j["a3"] = {{"ok", r.a3_ok()}, {"min_margin", number(r.a3_min_margin)}};
    j["a4"] = r.a4_note;
    j["criticality"] = number(r.criticality);
    j["eps_star"] = {{"ok", r.eps_star_ok}, {"first_bad_node", r.eps_star_first_bad_node}};
    return j;
}

Json to_json(const SolveReport& r) {
    Json j;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["eta"] = r.eta;
    j["cond4_alpha"] = r.cond4_alpha;
    j["sigma0"] = number(r.sigma0);
    j["b_tail"] = number(r.b_tail);
    j["rate_bound_ok"] = r.rate_bound_ok;
    j["monotone_ok"] = r.monotone_ok;
    j["max_monotone_increase"] = number(r.max_monotone_increase);
    j["residual_inf"] = number(r.residual_inf);
    j["interior_ok"] = r.interior_ok;
    if (!r.profile.empty()) {
        j["f_star_first"] = r.profile.front();
        j["gap_last"] = r.defect.empty() ? number(r.eta - r.profile.back()) : number(r.defect.back());
    }
    j["sup_diffs"] = numbers(r.sup_diffs);
    j["rate_envelope"] = numbers(rate_envelope(r, r.cond4_alpha));
    return j;
}

Json to_json(const NemytskyReport& r) {
    Json j;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["increasing_ok"] = r.increasing_ok;
    j["max_decrease"] = number(r.max_decrease);
    j["max_envelope_excess"] = number(r.max_envelope_excess);
    j["residual_inf"] = number(r.residual_inf);
    j["sandwich_lower_margin"] = number(r.sandwich_lower_margin);
    j["sandwich_upper_margin"] = number(r.sandwich_upper_margin);
    j["phi_tail"] = number(r.phi_tail);
    j["phi_integral"] = number(r.phi_integral);
    j["sup_diffs"] = numbers(r.sup_diffs);
    return j;
}

SolveReport solve_report_from_json(const Json& solve) {
    const auto real = [&](const char* key) {
        if (!solve.contains(key) || !solve.at(key).is_number()) {
            throw ConfigError(std::string("solve.") + key, "missing or not a number");
        }
        return solve.at(key).get<double>();
    };
    if (!solve.is_object()) {
        throw ConfigError("solve", "missing section");
    }
    SolveReport r;
    r.eta = real("eta");
    r.cond4_alpha = real("cond4_alpha");
    r.sigma0 = real("sigma0");
    if (!solve.contains("sup_diffs") || !solve.at("sup_diffs").is_array()) {
        throw ConfigError("solve.sup_diffs", "missing or not an array");
    }
    for (const auto& v : solve.at("sup_diffs")) {
        if (!v.is_number()) {
            throw ConfigError("solve.sup_diffs", "entries must be numbers");
        }
        r.sup_diffs.push_back(v.get<double>());
    }
    r.iterations = static_cast<int>(r.sup_diffs.size());
    r.converged = solve.value("converged", false);
    return r;
}

std::string emit_convergence_table(const SolveReport& report) {
    std::string out = "n,sup_diff,envelope,ratio\n";
    const auto env = rate_envelope(report, report.cond4_alpha);
    for (std::size_t n = 1; n < report.sup_diffs.size(); ++n) {
        const double d = report.sup_diffs[n];
        double ratio = 0.0;
        if (env[n] > 0.0) {
            ratio = d / env[n];
        } else if (d != 0.0) {
            ratio = std::numeric_limits<double>::infinity();
        }
        out += fmt::format("{},{},{},{}\n", n, d, env[n], ratio);
    }
    return out;
}

void write_profile(const std::filesystem::path& path, std::span<const double> nodes,
                   std::span<const double> gamma, const SolveReport& solve,
                   const NemytskyReport* nemytsky) {
    std::string text = "x,f_star,gamma,eta_minus_fstar";
    if (nemytsky != nullptr) {
        text += ",phi,lower_env,upper_env";
    }
    text += '\n';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double gap = solve.defect.empty() ? solve.eta - solve.profile[i] : solve.defect[i];
        text += fmt::format("{},{},{},{}", nodes[i], solve.profile[i], gamma[i], gap);
        if (nemytsky != nullptr) {
            text += fmt::format(",{},{},{}", nemytsky->profile[i], nemytsky->lower_envelope[i],
                                nemytsky->upper_envelope[i]);
        }
        text += '\n';
    }
    write_text(path, text);
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

} // namespace halfline::cli

#pragma once

#include "halfline/analysis.hpp"
#include "halfline/cli/config.hpp"
#include "halfline/kernels.hpp"
#include "halfline/nemytsky.hpp"
#include "halfline/nonlinearity.hpp"
#include "halfline/picard.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace halfline::cli {

inline constexpr const char* tool_version = "0.1.0";

Json to_json(const ConditionReport& r);
Json to_json(const GConditionReport& r);
Json to_json(const NemytskyConditionReport& r);
/// Includes sup_diffs and the rate envelope (null at n = 0).
Json to_json(const SolveReport& r);
Json to_json(const NemytskyReport& r);

/// Reads back the fields emit_convergence_table needs from a report's
/// "solve" section. Throws ConfigError on a malformed section.
SolveReport solve_report_from_json(const Json& solve);

/// Comma-delimited table with header "n,sup_diff,envelope,ratio" and one row
/// per n >= 1 (the range of the rate bound). envelope is η α^{n-1} ln(1/σ0),
/// which is 0 for σ0 = 1; ratio is sup_diff / envelope (0 when both vanish).
std::string emit_convergence_table(const SolveReport& report);

/// Node profile: x, f_star, gamma, eta_minus_fstar and, when `nemytsky` is
/// given, phi, lower_env, upper_env.
void write_profile(const std::filesystem::path& path, std::span<const double> nodes,
                   std::span<const double> gamma, const SolveReport& solve,
                   const NemytskyReport* nemytsky);

/// Two-space indented dump followed by a newline.
void write_json(const std::filesystem::path& path, const Json& doc);

} // namespace halfline::cli

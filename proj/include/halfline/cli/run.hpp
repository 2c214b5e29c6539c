#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace halfline::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,      // unreadable or invalid config
    exit_check_failed = 3, // a condition check or an enabled certificate failed
    exit_no_convergence = 4,
};

struct RunOptions {
    std::string command;             // check | solve | solve-nemytsky | table
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    std::filesystem::path report;    // table only
    std::optional<std::uint64_t> seed; // overrides certificates.seed
    int threads = 1;
};

/// Runs one subcommand. Writes report.json (always, once the config parsed),
/// profile.csv (after a converged solve) and run_meta.json (timestamps and
/// other run-dependent data kept out of the report) into out_dir.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

} // namespace halfline::cli

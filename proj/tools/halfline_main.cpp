#include "halfline/cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Hammerstein equations on the half-line: checks, solves, certificates"};
    app.require_subcommand(1);

    halfline::cli::RunOptions options;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config, "run configuration (JSON)")->required();
        sub->add_option("--out-dir", options.out_dir, "directory for report and profile files");
        sub->add_option("--seed", options.seed, "seed for the uniqueness probe (overrides config)");
        sub->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    add_common(app.add_subcommand("check", "verify kernel and nonlinearity conditions only"));
    add_common(app.add_subcommand("solve", "Picard iteration plus certificates"));
    add_common(app.add_subcommand("solve-nemytsky", "Picard, then the Nemytsky equation"));
    auto* table = app.add_subcommand("table", "print the convergence table of a report file");
    table->add_option("report", options.report, "report.json from a solve run")->required();
    table->add_option("--out-dir", options.out_dir, "also write convergence_table.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : halfline::cli::exit_config;
    }
    options.command = app.get_subcommands().front()->get_name();
    return halfline::cli::run(options, std::cout, std::cerr);
}

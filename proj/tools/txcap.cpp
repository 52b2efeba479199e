// txcap: capacity curves, overlay reports and Monte Carlo validation for
// two-tier Poisson wireless networks.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "txcap/txcap.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

void attach_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file (key = value lines)");
    cmd->add_option("--out", opts.out_path,
                    "output CSV path (default stdout; relative paths resolve under "
                    "$TXCAP_OUT_DIR when set)");
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed override");
    cmd->add_option("--trials", opts.trials, "Monte Carlo trial-count override");
}

txcap::Scenario load_scenario(const CommonOpts& opts) {
    txcap::Scenario sc;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in)
            throw txcap::config_error("cannot read config file '" + opts.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        sc = txcap::parse_scenario(text.str());
    }
    if (opts.seed) sc.sim.seed = *opts.seed;
    if (opts.trials) sc.sim.trials = *opts.trials;
    return sc;
}

void emit(const CommonOpts& opts, const txcap::CsvTable& table) {
    if (opts.out_path.empty()) {
        table.write(std::cout);
        return;
    }
    std::filesystem::path path(opts.out_path);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("TXCAP_OUT_DIR"); dir && *dir)
            path = std::filesystem::path(dir) / path;
    }
    std::ofstream out(path);
    if (!out)
        throw txcap::config_error("cannot write output file '" + path.string() + "'");
    table.write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission capacities of overlaid Poisson wireless networks"};
    app.require_subcommand(1);

    CommonOpts opts;
    int fig_id = 1;

    CLI::App* fig = app.add_subcommand(
        "figure", "emit one of the predefined study curves (1..6) as CSV");
    fig->add_option("n", fig_id, "curve id")->required()->check(CLI::Range(1, 6));
    attach_common(fig, opts);

    CLI::App* rep = app.add_subcommand(
        "report", "single-point overlay capacity report at the configured budgets");
    attach_common(rep, opts);

    CLI::App* swp = app.add_subcommand(
        "sweep", "run the scenario's sweep_var/sweep_grid and emit one row per point");
    attach_common(swp, opts);

    CLI::App* val = app.add_subcommand(
        "validate", "cross-check closed forms against the Monte Carlo sampler");
    attach_common(val, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const txcap::Scenario sc = load_scenario(opts);
        if (fig->parsed()) {
            emit(opts, txcap::run_figure(fig_id, sc));
        } else if (rep->parsed()) {
            emit(opts, txcap::run_report(sc));
        } else if (swp->parsed()) {
            emit(opts, txcap::run_sweep(sc));
        } else if (val->parsed()) {
            const auto res = txcap::run_validation(sc);
            emit(opts, res.table);
            if (!res.all_pass) {
                std::cerr << "validation FAILED\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

// Benchmark harness CLI. Exit codes: 0 success, 2 configuration or usage
// error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "osilp/errors.hpp"
#include "osilp/harness.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    long reps = 0;
    bool paper_scale = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* reps_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "experiment config file")->required();
    o.seed_opt = cmd->add_option("--seed", o.seed, "override master_seed");
    o.reps_opt = cmd->add_option("--reps", o.reps, "override replication count");
    cmd->add_flag("--paper-scale", o.paper_scale,
                  "full-scale preset: m=2000, T=5000, reps=100 (swept axis keeps its list)");
    cmd->add_option("--out", o.out, "write the CSV here instead of stdout");
}

int run_or_sweep(bool is_sweep, const CommonOpts& o) {
    try {
        osilp::ExperimentConfig cfg = osilp::load_config_file(o.config);
        if (o.seed_opt->count() > 0) cfg.master_seed = o.seed;
        if (o.reps_opt->count() > 0) {
            if (o.reps < 1) throw osilp::config_error("--reps: must be >= 1");
            cfg.reps = o.reps;
        }
        if (o.paper_scale) osilp::apply_paper_scale(cfg);
        std::ofstream fout;
        std::ostream* csv = &std::cout;
        if (!o.out.empty()) {
            fout.open(o.out, std::ios::binary);
            if (!fout) throw osilp::config_error("cannot open output file: " + o.out);
            csv = &fout;
        }
        return is_sweep ? osilp::cli_sweep(cfg, *csv, std::cerr)
                        : osilp::cli_run(cfg, *csv, std::cerr);
    } catch (const osilp::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online semi-infinite LP: policies, oracles and experiment harness"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts;
    std::string plot_in, plot_out;

    CLI::App* cmd_run = app.add_subcommand("run", "replicate one experiment point");
    add_common(cmd_run, run_opts);
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a T or m sweep with slope fits");
    add_common(cmd_sweep, sweep_opts);
    CLI::App* cmd_plot = app.add_subcommand("plot", "render SVG plots from a results CSV");
    cmd_plot->add_option("--config", plot_in, "results CSV produced by run or sweep")->required();
    cmd_plot->add_option("--out", plot_out, "output path prefix for the SVG files")->required();
    CLI::App* cmd_self = app.add_subcommand("selftest", "internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (cmd_run->parsed()) return run_or_sweep(false, run_opts);
    if (cmd_sweep->parsed()) return run_or_sweep(true, sweep_opts);
    if (cmd_plot->parsed()) return osilp::cli_plot(plot_in, plot_out, std::cerr);
    if (cmd_self->parsed()) return osilp::cli_selftest(std::cerr);
    return 2;
}

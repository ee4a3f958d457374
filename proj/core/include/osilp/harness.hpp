#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "osilp/instance.hpp"

// Experiment harness: config parsing, seeded replication, CSV emission and
// plotting. Everything an experiment emits is a pure function of
// (config, master_seed) except the wall_ms column.
//
// Seed chain: per replication, instance_seed = child(child(master, point),
// rep); stream, rhs and shuffle each draw from child(instance_seed, k) with
// a fixed k. Replications never share generator state, so dropping or adding
// one leaves every other row unchanged.

namespace osilp {

struct ExperimentConfig {
    // [experiment]
    std::vector<std::string> algos{"alg2"};  // alg1 alg2 alg5 alg6 alg7 simple_gd
    InputModel model = InputModel::stochastic;
    std::string dist = "uniform";  // uniform | normal | cauchy | permutation-mix
    long T = 2000;
    int m = 200;
    int q = 10;
    int K = 20;  // support size; 0 = continuous source
    long reps = 20;
    uint64_t master_seed = 42;
    std::string potential = "quadratic";  // quadratic | entropy (alg2, alg6)
    std::string general_model = "log_utility";  // linear | log_utility (alg6, alg7)
    double d_lo = 2.0, d_hi = 3.0;  // per-period budget range, d_j ~ U[d_lo, d_hi]

    // [two_stage]  (alg5, alg7)
    double ts_delta = 0.1;
    double ts_lambda = 1.0;
    double ts_theta = 1.0;
    long ts_J_override = 0;  // 0 = schedule formula (capped at T / (2L))

    // [sweep]
    std::string sweep_axis;  // "", "T" or "M"
    std::vector<long> sweep_values;  // strictly increasing; empty = default grid
};

// key = value lines under [experiment] / [two_stage] / [sweep] headers.
// '#' starts a comment. Unknown sections or keys raise config_error listing
// every offender. serialize_config(parse_config(s)) is a fixed point.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Scale presets. Desk scale is the constructor default; paper scale bumps
// m=2000, T=5000, reps=100 (a swept axis keeps its value list).
void apply_paper_scale(ExperimentConfig& cfg);

struct ResultRow {
    std::string run_id;  // r001.. | aggregate | slope
    std::string algo;
    std::string model;
    std::string dist;
    long T = 0;
    int m = 0;
    int q = 0;
    uint64_t seed = 0;
    double reward = 0;
    double benchmark = 0;
    double regret = 0;
    double regret_ratio = 0;
    double violation_projected = 0;
    double violation_dual = 0;
    double t_fast = -1;  // -1 for single-stage runs
    double wall_ms = 0;
};

extern const char* const kResultHeader;

void write_result_header(std::ostream& os);
void write_result_row(const ResultRow& row, std::ostream& os);

// One experiment point: `reps` replications of every configured algorithm,
// one aggregate row per algorithm. Rows come back in emission order.
std::vector<ResultRow> run_point(const ExperimentConfig& cfg, long point_index, long T, int m,
                                 std::ostream& err);

// Entry points behind the CLI subcommands. Errors are caught and printed to
// `err`; the return value is the process exit code: 0 ok, 2 config error,
// 3 numeric failure.
int cli_run(const ExperimentConfig& cfg, std::ostream& csv_out, std::ostream& err);
int cli_sweep(const ExperimentConfig& cfg, std::ostream& csv_out, std::ostream& err);
int cli_plot(const std::string& results_csv, const std::string& out_prefix, std::ostream& err);
int cli_selftest(std::ostream& err);

}  // namespace osilp

#include "osilp/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "osilp/basis.hpp"
#include "osilp/errors.hpp"
#include "osilp/metrics.hpp"
#include "osilp/oracle.hpp"
#include "osilp/policies.hpp"
#include "osilp/svg.hpp"
#include "osilp/textio.hpp"

namespace osilp {

const char* const kResultHeader =
    "run_id,algo,model,dist,T,m,q,seed,reward,benchmark,regret,regret_ratio,"
    "violation_projected,violation_dual,t_fast,wall_ms";

namespace {

const char* const kAlgoNames[] = {"alg1", "alg2", "alg5", "alg6", "alg7", "simple_gd"};

bool known_algo(const std::string& s) {
    for (const char* a : kAlgoNames)
        if (s == a) return true;
    return false;
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) out.push_back(trim(cur));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

std::string g17s(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// strict numeric parses: the whole token must be consumed
bool parse_ll(const std::string& s, long long& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) return false;
    out = v;
    return true;
}

bool parse_u64(const std::string& s, uint64_t& out) {
    const std::string t = trim(s);
    if (t.empty() || t[0] == '-') return false;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) return false;
    out = v;
    return true;
}

bool parse_dbl(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    out = v;
    return true;
}

const char* model_name(InputModel m) {
    return m == InputModel::stochastic ? "stochastic" : "permutation";
}

DistConfig dist_config_of(const ExperimentConfig& cfg) {
    DistConfig d;
    if (cfg.dist == "uniform") d = preset_uniform();
    else if (cfg.dist == "normal") d = preset_normal();
    else if (cfg.dist == "cauchy") d = preset_cauchy();
    else d = preset_perm_mix();
    d.support_K = cfg.K;
    return d;
}

// 10 log-spaced values from max(hi/10, floor) to hi, rounded and deduped.
std::vector<long> default_grid(long hi, long floor_lo) {
    long lo = std::max(hi / 10, floor_lo);
    if (lo >= hi) lo = std::max(1L, hi / 2);
    std::vector<long> vals;
    for (int i = 0; i < 10; ++i) {
        const double f = static_cast<double>(i) / 9.0;
        const double v = static_cast<double>(lo) *
                         std::pow(static_cast<double>(hi) / static_cast<double>(lo), f);
        const long lv = std::lround(v);
        if (vals.empty() || lv > vals.back()) vals.push_back(lv);
    }
    if (vals.empty() || vals.back() != hi) vals.push_back(hi);
    return vals;
}

void validate(ExperimentConfig& cfg, std::vector<std::string>& problems) {
    if (cfg.algos.empty()) problems.push_back("algo: empty list");
    for (const auto& a : cfg.algos)
        if (!known_algo(a)) problems.push_back("algo: unknown name '" + a + "'");
    for (size_t i = 0; i + 1 < cfg.algos.size(); ++i)
        for (size_t j = i + 1; j < cfg.algos.size(); ++j)
            if (cfg.algos[i] == cfg.algos[j]) {
                problems.push_back("algo: duplicate '" + cfg.algos[i] + "'");
                j = cfg.algos.size();
            }
    if (cfg.dist != "uniform" && cfg.dist != "normal" && cfg.dist != "cauchy" &&
        cfg.dist != "permutation-mix")
        problems.push_back("dist: unknown preset '" + cfg.dist + "'");
    if (cfg.T < 1) problems.push_back("T: must be >= 1");
    if (cfg.m < 1) problems.push_back("m: must be >= 1");
    if (cfg.q < 1) problems.push_back("q: must be >= 1");
    if (cfg.K < 0) problems.push_back("K: must be >= 0");
    if (cfg.reps < 1) problems.push_back("reps: must be >= 1");
    if (cfg.potential != "quadratic" && cfg.potential != "entropy")
        problems.push_back("potential: must be quadratic or entropy");
    if (cfg.general_model != "linear" && cfg.general_model != "log_utility")
        problems.push_back("general_model: must be linear or log_utility");
    if (!(cfg.d_lo > 0.0 && cfg.d_hi > cfg.d_lo))
        problems.push_back("d_lo/d_hi: need 0 < d_lo < d_hi");
    if (!(cfg.ts_delta > 0.0 && cfg.ts_delta < 1.0))
        problems.push_back("two_stage.delta: must lie in (0,1)");
    if (!(cfg.ts_lambda > 0.0)) problems.push_back("two_stage.lambda: must be positive");
    if (!(cfg.ts_theta > 0.0)) problems.push_back("two_stage.theta: must be positive");
    if (cfg.ts_J_override < 0) problems.push_back("two_stage.J_override: must be >= 0");
    if (!cfg.sweep_axis.empty() && cfg.sweep_axis != "T" && cfg.sweep_axis != "M")
        problems.push_back("sweep.axis: must be T or M");
    if (cfg.sweep_axis.empty() && !cfg.sweep_values.empty())
        problems.push_back("sweep.values: set without sweep.axis");
    for (size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        if (cfg.sweep_values[i] < 1) {
            problems.push_back("sweep.values: entries must be >= 1");
            break;
        }
        if (i > 0 && cfg.sweep_values[i] <= cfg.sweep_values[i - 1]) {
            problems.push_back("sweep.values: must be strictly increasing");
            break;
        }
    }
    if (cfg.sweep_axis == "M")
        for (long v : cfg.sweep_values)
            if (v > 100000000) {
                problems.push_back("sweep.values: m value out of range");
                break;
            }
    if (problems.empty() && !cfg.sweep_axis.empty() && cfg.sweep_values.empty())
        cfg.sweep_values =
            default_grid(cfg.sweep_axis == "T" ? cfg.T : cfg.m, cfg.sweep_axis == "T" ? 20 : 10);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

const GeneralModel& model_of(const ExperimentConfig& cfg) {
    static const LinearModel lin;
    static const LogUtilityModel logu;
    if (cfg.general_model == "linear") return lin;
    return logu;
}

TwoStageConfig plan_of(const ExperimentConfig& cfg, long T, const DataBounds& bounds,
                       double consum_bar) {
    TwoStageConfig ts;
    ts.delta = cfg.ts_delta;
    ts.lambda = cfg.ts_lambda;
    ts.theta = cfg.ts_theta;
    ts.J_override = cfg.ts_J_override;
    return plan_two_stage(T, bounds, consum_bar, ts);
}

Trajectory run_algo(const std::string& algo, const ProjectedStream& ps,
                    const ExperimentConfig& cfg, const DataBounds& bounds) {
    const double gamma = 1.0 / std::sqrt(static_cast<double>(ps.T));
    const Potential psi =
        cfg.potential == "entropy" ? Potential::entropy() : Potential::quadratic();
    if (algo == "alg1") return run_alg1(ps, gamma);
    if (algo == "alg2") return run_alg2(ps, gamma, psi);
    if (algo == "simple_gd") return run_simple_gd_baseline(ps, gamma);
    if (algo == "alg5") return run_two_stage(ps, plan_of(cfg, ps.T, bounds, bounds.C_bar));
    if (algo == "alg6") return run_general_md(ps, model_of(cfg), gamma, psi);
    if (algo == "alg7") {
        const GeneralModel& model = model_of(cfg);
        return run_general_two_stage(ps, model,
                                     plan_of(cfg, ps.T, bounds, model.g_bar(bounds)));
    }
    throw config_error("unknown algorithm: " + algo);
}

std::vector<ResultRow> run_one_rep(const ExperimentConfig& cfg, long point_index, long rep,
                                   long T, int m, const Basis& basis) {
    const uint64_t inst_seed =
        child_seed(child_seed(cfg.master_seed, static_cast<uint64_t>(point_index)),
                   static_cast<uint64_t>(rep));
    const DistConfig dc = dist_config_of(cfg);
    ArrivalStream stream;
    if (cfg.model == InputModel::stochastic) {
        stream = stream_stochastic(dc, T, m, child_seed(inst_seed, 1));
    } else {
        const ArrivalStream base = stream_stochastic(dc, T, m, child_seed(inst_seed, 1));
        stream = stream_permutation(base, child_seed(inst_seed, 3));
    }
    const Instance inst =
        make_instance(T, sample_rhs(m, cfg.d_lo, cfg.d_hi, child_seed(inst_seed, 2)));
    const ProjectedStream ps = make_projected(stream, basis, inst);
    const DataBounds bounds = compute_bounds(stream, inst, basis, dc.heavy_tailed());
    const BenchmarkReport bench = benchmark(ps);

    std::vector<ResultRow> rows;
    rows.reserve(cfg.algos.size());
    for (const std::string& algo : cfg.algos) {
        Timer timer;
        const Trajectory traj = run_algo(algo, ps, cfg, bounds);
        const RunMetrics met = compute_run_metrics(traj, bench.r_phi_star, basis);
        ResultRow row;
        {
            char buf[24];
            std::snprintf(buf, sizeof buf, "r%03ld", rep + 1);
            row.run_id = buf;
        }
        row.algo = algo;
        row.model = model_name(cfg.model);
        row.dist = cfg.dist;
        row.T = T;
        row.m = m;
        row.q = cfg.q;
        row.seed = inst_seed;
        row.reward = traj.total_reward;
        row.benchmark = bench.r_phi_star;
        row.regret = met.regret;
        row.regret_ratio = met.regret_ratio;
        row.violation_projected = met.violation_projected;
        row.violation_dual = met.violation_dual_tested;
        row.t_fast = static_cast<double>(traj.t_fast);
        row.wall_ms = timer.ms();
        rows.push_back(std::move(row));
    }
    return rows;
}

int worker_count(long reps) {
    long w = reps;
    unsigned hc = std::thread::hardware_concurrency();
    if (hc == 0) hc = 4;
    if (static_cast<long>(hc) < w) w = static_cast<long>(hc);
    if (const char* s = std::getenv("OSILP_THREADS")) {
        long long v = 0;
        if (!parse_ll(s, v) || v < 1)
            throw config_error("OSILP_THREADS: expected a positive integer");
        w = std::min<long>(w, static_cast<long>(v));
    }
    return static_cast<int>(std::max(1L, w));
}

ResultRow aggregate_row(const std::vector<ResultRow>& rows, uint64_t master_seed) {
    ResultRow a = rows.front();
    a.run_id = "aggregate";
    a.seed = master_seed;
    auto mean = [&](double ResultRow::*f) {
        double s = 0.0;
        for (const auto& r : rows) s += r.*f;
        return s / static_cast<double>(rows.size());
    };
    a.reward = mean(&ResultRow::reward);
    a.benchmark = mean(&ResultRow::benchmark);
    a.regret = mean(&ResultRow::regret);
    a.regret_ratio = mean(&ResultRow::regret_ratio);
    a.violation_projected = mean(&ResultRow::violation_projected);
    a.violation_dual = mean(&ResultRow::violation_dual);
    a.t_fast = mean(&ResultRow::t_fast);
    a.wall_ms = mean(&ResultRow::wall_ms);
    return a;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::vector<std::string> problems;
    std::string section = "experiment";
    std::string line;
    long lineno = 0;

    auto bad = [&](const std::string& what) {
        problems.push_back("line " + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                bad("malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "two_stage" && section != "sweep")
                bad("unknown section [" + section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            bad("expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        long long ll = 0;
        double dd = 0.0;
        uint64_t uu = 0;

        if (section == "experiment") {
            if (key == "preset") {
                if (val == "uniform-fixedM") {
                    cfg.model = InputModel::stochastic;
                    cfg.dist = "uniform";
                    cfg.m = 2000;
                    cfg.d_lo = 2.0;
                    cfg.d_hi = 3.0;
                } else {
                    bad("unknown preset '" + val + "'");
                }
            } else if (key == "algo") {
                cfg.algos = split_list(val);
            } else if (key == "model") {
                if (val == "stochastic") cfg.model = InputModel::stochastic;
                else if (val == "permutation") cfg.model = InputModel::permutation;
                else bad("model: must be stochastic or permutation");
            } else if (key == "dist") {
                cfg.dist = val;
            } else if (key == "T") {
                if (parse_ll(val, ll)) cfg.T = static_cast<long>(ll);
                else bad("T: not an integer");
            } else if (key == "m") {
                if (parse_ll(val, ll)) cfg.m = static_cast<int>(ll);
                else bad("m: not an integer");
            } else if (key == "q") {
                if (parse_ll(val, ll)) cfg.q = static_cast<int>(ll);
                else bad("q: not an integer");
            } else if (key == "K") {
                if (parse_ll(val, ll)) cfg.K = static_cast<int>(ll);
                else bad("K: not an integer");
            } else if (key == "reps") {
                if (parse_ll(val, ll)) cfg.reps = static_cast<long>(ll);
                else bad("reps: not an integer");
            } else if (key == "master_seed") {
                if (parse_u64(val, uu)) cfg.master_seed = uu;
                else bad("master_seed: not an unsigned integer");
            } else if (key == "potential") {
                cfg.potential = val;
            } else if (key == "general_model") {
                cfg.general_model = val;
            } else if (key == "d_lo") {
                if (parse_dbl(val, dd)) cfg.d_lo = dd;
                else bad("d_lo: not a number");
            } else if (key == "d_hi") {
                if (parse_dbl(val, dd)) cfg.d_hi = dd;
                else bad("d_hi: not a number");
            } else {
                bad("unknown key '" + key + "' in [experiment]");
            }
        } else if (section == "two_stage") {
            if (key == "delta") {
                if (parse_dbl(val, dd)) cfg.ts_delta = dd;
                else bad("delta: not a number");
            } else if (key == "lambda") {
                if (parse_dbl(val, dd)) cfg.ts_lambda = dd;
                else bad("lambda: not a number");
            } else if (key == "theta") {
                if (parse_dbl(val, dd)) cfg.ts_theta = dd;
                else bad("theta: not a number");
            } else if (key == "J_override") {
                if (parse_ll(val, ll)) cfg.ts_J_override = static_cast<long>(ll);
                else bad("J_override: not an integer");
            } else {
                bad("unknown key '" + key + "' in [two_stage]");
            }
        } else if (section == "sweep") {
            if (key == "axis") {
                cfg.sweep_axis = val;
            } else if (key == "values") {
                cfg.sweep_values.clear();
                if (trim(val).empty()) {
                    bad("values: empty list");
                } else {
                    for (const std::string& part : split_list(val)) {
                        if (parse_ll(part, ll)) cfg.sweep_values.push_back(static_cast<long>(ll));
                        else bad("values: '" + part + "' is not an integer");
                    }
                }
            } else {
                bad("unknown key '" + key + "' in [sweep]");
            }
        }
    }

    validate(cfg, problems);
    if (!problems.empty()) {
        std::string msg = "config:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw config_error(msg);
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open config file: " + path);
    return parse_config(f);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "algo = ";
    for (size_t i = 0; i < cfg.algos.size(); ++i) os << (i ? "," : "") << cfg.algos[i];
    os << "\n";
    os << "model = " << model_name(cfg.model) << "\n";
    os << "dist = " << cfg.dist << "\n";
    os << "T = " << cfg.T << "\n";
    os << "m = " << cfg.m << "\n";
    os << "q = " << cfg.q << "\n";
    os << "K = " << cfg.K << "\n";
    os << "reps = " << cfg.reps << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "potential = " << cfg.potential << "\n";
    os << "general_model = " << cfg.general_model << "\n";
    os << "d_lo = " << g17s(cfg.d_lo) << "\n";
    os << "d_hi = " << g17s(cfg.d_hi) << "\n";
    os << "\n[two_stage]\n";
    os << "delta = " << g17s(cfg.ts_delta) << "\n";
    os << "lambda = " << g17s(cfg.ts_lambda) << "\n";
    os << "theta = " << g17s(cfg.ts_theta) << "\n";
    os << "J_override = " << cfg.ts_J_override << "\n";
    if (!cfg.sweep_axis.empty()) {
        os << "\n[sweep]\n";
        os << "axis = " << cfg.sweep_axis << "\n";
        os << "values = ";
        for (size_t i = 0; i < cfg.sweep_values.size(); ++i)
            os << (i ? "," : "") << cfg.sweep_values[i];
        os << "\n";
    }
    return os.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.algos == b.algos && a.model == b.model && a.dist == b.dist && a.T == b.T &&
           a.m == b.m && a.q == b.q && a.K == b.K && a.reps == b.reps &&
           a.master_seed == b.master_seed && a.potential == b.potential &&
           a.general_model == b.general_model && a.d_lo == b.d_lo && a.d_hi == b.d_hi &&
           a.ts_delta == b.ts_delta && a.ts_lambda == b.ts_lambda && a.ts_theta == b.ts_theta &&
           a.ts_J_override == b.ts_J_override && a.sweep_axis == b.sweep_axis &&
           a.sweep_values == b.sweep_values;
}

void apply_paper_scale(ExperimentConfig& cfg) {
    if (cfg.sweep_axis != "M") cfg.m = 2000;
    if (cfg.sweep_axis != "T") cfg.T = 5000;
    cfg.reps = 100;
}

void write_result_header(std::ostream& os) { os << kResultHeader << '\n'; }

void write_result_row(const ResultRow& r, std::ostream& os) {
    os << r.run_id << ',' << r.algo << ',' << r.model << ',' << r.dist << ',' << r.T << ','
       << r.m << ',' << r.q << ',' << r.seed << ',';
    put_g17(os, r.reward);
    os << ',';
    put_g17(os, r.benchmark);
    os << ',';
    put_g17(os, r.regret);
    os << ',';
    put_g17(os, r.regret_ratio);
    os << ',';
    put_g17(os, r.violation_projected);
    os << ',';
    put_g17(os, r.violation_dual);
    os << ',';
    put_g17(os, r.t_fast);
    os << ',';
    put_g17(os, r.wall_ms);
    os << '\n';
}

std::vector<ResultRow> run_point(const ExperimentConfig& cfg, long point_index, long T, int m,
                                 std::ostream&) {
    BasisSpec bs;
    bs.m = m;
    bs.q = cfg.q;
    const Basis basis = build_rbf_basis(bs);

    const long reps = cfg.reps;
    std::vector<std::vector<ResultRow>> per_rep(static_cast<size_t>(reps));
    std::vector<std::exception_ptr> failed(static_cast<size_t>(reps));
    std::atomic<long> next{0};
    auto body = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= reps) return;
            try {
                per_rep[static_cast<size_t>(i)] = run_one_rep(cfg, point_index, i, T, m, basis);
            } catch (...) {
                failed[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };
    const int workers = worker_count(reps);
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : failed)
        if (e) std::rethrow_exception(e);

    // emit replication-major per algorithm, aggregate row closing each block
    std::vector<ResultRow> out;
    out.reserve(static_cast<size_t>(reps + 1) * cfg.algos.size());
    for (size_t ai = 0; ai < cfg.algos.size(); ++ai) {
        std::vector<ResultRow> block;
        block.reserve(static_cast<size_t>(reps));
        for (long i = 0; i < reps; ++i) block.push_back(per_rep[static_cast<size_t>(i)][ai]);
        out.insert(out.end(), block.begin(), block.end());
        out.push_back(aggregate_row(block, cfg.master_seed));
    }
    return out;
}

int cli_run(const ExperimentConfig& cfg, std::ostream& csv_out, std::ostream& err) {
    try {
        if (!cfg.sweep_axis.empty())
            throw config_error("run: config has a [sweep] section; use the sweep command");
        err << "# effective config\n" << serialize_config(cfg) << std::flush;
        write_result_header(csv_out);
        for (const ResultRow& r : run_point(cfg, 0, cfg.T, cfg.m, err)) write_result_row(r, csv_out);
        csv_out.flush();
        return csv_out ? 0 : 3;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

int cli_sweep(const ExperimentConfig& cfg, std::ostream& csv_out, std::ostream& err) {
    try {
        if (cfg.sweep_axis.empty())
            throw config_error("sweep: config has no [sweep] section");
        if (cfg.sweep_values.empty()) throw config_error("sweep: empty value list");
        err << "# effective config\n" << serialize_config(cfg) << std::flush;
        write_result_header(csv_out);

        std::vector<std::vector<std::pair<double, double>>> regret_pts(cfg.algos.size());
        for (size_t pi = 0; pi < cfg.sweep_values.size(); ++pi) {
            const long v = cfg.sweep_values[pi];
            const long T = cfg.sweep_axis == "T" ? v : cfg.T;
            const int m = cfg.sweep_axis == "M" ? static_cast<int>(v) : cfg.m;
            const auto rows = run_point(cfg, static_cast<long>(pi), T, m, err);
            size_t ai = 0;
            for (const ResultRow& r : rows) {
                write_result_row(r, csv_out);
                if (r.run_id == "aggregate") {
                    regret_pts[ai].emplace_back(static_cast<double>(v), r.regret);
                    ++ai;
                }
            }
        }
        if (cfg.sweep_axis == "T") {
            for (size_t ai = 0; ai < cfg.algos.size(); ++ai) {
                SlopeFit fit;
                try {
                    fit = fit_loglog_slope(regret_pts[ai]);
                } catch (const config_error& e) {
                    err << "warning: no slope row for " << cfg.algos[ai] << ": " << e.what()
                        << '\n';
                    continue;
                }
                if (fit.excluded > 0)
                    err << "note: slope fit for " << cfg.algos[ai] << " dropped " << fit.excluded
                        << " non-positive mean regrets\n";
                ResultRow s;
                s.run_id = "slope";
                s.algo = cfg.algos[ai];
                s.model = model_name(cfg.model);
                s.dist = cfg.dist;
                s.T = 0;
                s.m = cfg.m;
                s.q = cfg.q;
                s.seed = cfg.master_seed;
                s.benchmark = fit.intercept;   // log-log intercept
                s.regret = fit.slope;          // fitted growth exponent
                s.regret_ratio = fit.r2;
                s.t_fast = -1;
                write_result_row(s, csv_out);
            }
        }
        csv_out.flush();
        return csv_out ? 0 : 3;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

namespace {

double field_num(const std::vector<std::string>& f, size_t idx, const std::string& path,
                 long lineno) {
    double v = 0.0;
    if (!parse_dbl(f[idx], v))
        throw config_error(path + ":" + std::to_string(lineno) + ": field " +
                           std::to_string(idx + 1) + " is not numeric: '" + f[idx] + "'");
    return v;
}

struct MetricCol {
    const char* name;
    size_t idx;
};

}  // namespace

int cli_plot(const std::string& results_csv, const std::string& out_prefix, std::ostream& err) {
    try {
        std::ifstream f(results_csv, std::ios::binary);
        if (!f) throw config_error("plot: cannot open " + results_csv);
        std::string line;
        long lineno = 0;
        if (!std::getline(f, line)) throw config_error(results_csv + ":1: empty file");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != kResultHeader)
            throw config_error(results_csv + ":1: unexpected header (expected the run/sweep "
                               "result schema)");

        const MetricCol metrics[4] = {{"regret", 10},
                                      {"regret_ratio", 11},
                                      {"violation_projected", 12},
                                      {"violation_dual", 13}};
        std::vector<std::string> algo_order;
        // algo -> x -> per-metric samples
        std::map<std::string, std::map<double, std::array<std::vector<double>, 4>>> samples;
        std::map<double, int> seen_T, seen_m;
        struct RawRow {
            std::string algo;
            double T = 0, m = 0;
            double vals[4] = {0, 0, 0, 0};
        };
        std::vector<RawRow> raw;
        while (std::getline(f, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty())
                throw config_error(results_csv + ":" + std::to_string(lineno) + ": blank line");
            const auto fields = split_csv_line(line);
            if (fields.size() != 16)
                throw config_error(results_csv + ":" + std::to_string(lineno) +
                                   ": expected 16 fields, got " + std::to_string(fields.size()));
            if (fields[0] == "aggregate" || fields[0] == "slope") continue;
            RawRow r;
            r.algo = fields[1];
            r.T = field_num(fields, 4, results_csv, lineno);
            r.m = field_num(fields, 5, results_csv, lineno);
            for (int k = 0; k < 4; ++k)
                r.vals[k] = field_num(fields, metrics[k].idx, results_csv, lineno);
            seen_T[r.T]++;
            seen_m[r.m]++;
            bool known = false;
            for (const auto& a : algo_order) known = known || a == r.algo;
            if (!known) algo_order.push_back(r.algo);
            raw.push_back(std::move(r));
        }
        if (raw.empty())
            throw config_error(results_csv + ": no result rows (only header/aggregates)");

        const bool sweep_T = seen_T.size() > 1;
        const bool sweep_m = !sweep_T && seen_m.size() > 1;
        const char* xlabel = sweep_m ? "m" : "T";
        for (const RawRow& r : raw) {
            const double x = sweep_m ? r.m : r.T;
            auto& cell = samples[r.algo][x];
            for (int k = 0; k < 4; ++k) cell[static_cast<size_t>(k)].push_back(r.vals[k]);
        }

        bool logx = true;
        {
            double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
            const auto& axis_counts = sweep_m ? seen_m : seen_T;
            for (const auto& kv : axis_counts) {
                xmin = std::min(xmin, kv.first);
                xmax = std::max(xmax, kv.first);
            }
            logx = xmin > 0.0 && xmax >= 8.0 * xmin;
        }

        for (int k = 0; k < 4; ++k) {
            std::vector<PlotSeries> series;
            for (const std::string& algo : algo_order) {
                PlotSeries s;
                s.name = algo;
                for (const auto& cell : samples[algo]) {
                    const auto& xs = cell.second[static_cast<size_t>(k)];
                    double sum = 0.0;
                    long n = 0;
                    for (double v : xs)
                        if (std::isfinite(v)) {
                            sum += v;
                            ++n;
                        }
                    if (n == 0) continue;
                    const double mean = sum / static_cast<double>(n);
                    double ss = 0.0;
                    for (double v : xs)
                        if (std::isfinite(v)) ss += (v - mean) * (v - mean);
                    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
                    const double half = n > 1 ? 1.96 * sd / std::sqrt(static_cast<double>(n)) : 0.0;
                    s.x.push_back(cell.first);
                    s.y.push_back(mean);
                    s.lo.push_back(mean - half);
                    s.hi.push_back(mean + half);
                }
                if (!s.x.empty()) series.push_back(std::move(s));
            }
            const std::string out = out_prefix + "_" + metrics[k].name + ".svg";
            write_svg_plot(out, metrics[k].name, xlabel, metrics[k].name, series, logx);
            err << "wrote " << out << '\n';
        }
        return 0;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

namespace {

// drop the trailing wall_ms field of every data row
std::string strip_wall(const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        const size_t p = line.rfind(',');
        os << (p == std::string::npos ? line : line.substr(0, p)) << '\n';
    }
    return os.str();
}

}  // namespace

int cli_selftest(std::ostream& err) {
    try {
        ExperimentConfig cfg;
        cfg.algos = {"alg1", "alg2", "alg5", "alg6", "alg7", "simple_gd"};
        cfg.T = 60;
        cfg.m = 8;
        cfg.q = 3;
        cfg.K = 5;
        cfg.reps = 2;
        cfg.master_seed = 7;
        std::ostringstream a, b, quiet;
        if (cli_run(cfg, a, quiet) != 0 || cli_run(cfg, b, quiet) != 0)
            throw numeric_error("selftest: run failed:\n" + quiet.str());
        if (strip_wall(a.str()) != strip_wall(b.str()))
            throw numeric_error("selftest: repeated run differs outside wall_ms");
        err << "selftest: determinism ok\n";

        // gated runs must leave a non-negative budget in every coordinate
        std::istringstream rows(a.str());
        std::string line;
        std::getline(rows, line);  // header
        bool saw_gated = false;
        while (std::getline(rows, line)) {
            const auto f = split_csv_line(line);
            if (f.size() != 16 || f[0] == "aggregate") continue;
            if (f[1] == "alg5" || f[1] == "alg7") {
                saw_gated = true;
                if (f[12] != "0")
                    throw numeric_error("selftest: gated run reported violation " + f[12]);
            }
        }
        if (!saw_gated) throw numeric_error("selftest: no gated rows found");
        err << "selftest: budget gate exact\n";

        // strong duality on one small instance
        const uint64_t seed = 99;
        DistConfig dc = preset_uniform();
        dc.support_K = 6;
        const ArrivalStream stream = stream_stochastic(dc, 80, 10, child_seed(seed, 1));
        const Instance inst = make_instance(80, sample_rhs(10, 2.0, 3.0, child_seed(seed, 2)));
        BasisSpec bs;
        bs.m = 10;
        bs.q = 4;
        const Basis basis = build_rbf_basis(bs);
        const ProjectedStream ps = make_projected(stream, basis, inst);
        const BenchmarkReport rep = benchmark(ps);
        if (!(std::fabs(rep.gap) <= 1e-6 * (1.0 + std::fabs(rep.r_phi_star))))
            throw numeric_error("selftest: duality gap " + g17s(rep.gap));
        err << "selftest: duality gap ok\n";
        err << "selftest: ok\n";
        return 0;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace osilp

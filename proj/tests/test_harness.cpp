#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "osilp/errors.hpp"
#include "osilp/harness.hpp"

using namespace osilp;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(const std::string& algos, long reps) {
    std::istringstream is(
        "[experiment]\n"
        "algo = " + algos + "\n"
        "model = stochastic\n"
        "dist = uniform\n"
        "T = 40\nm = 6\nq = 3\nK = 5\n"
        "reps = " + std::to_string(reps) + "\n"
        "master_seed = 9\n");
    return parse_config(is);
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

// drop the trailing wall_ms field, the one column allowed to vary
std::string sans_wall(const std::string& line) {
    const size_t pos = line.rfind(',');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("config: serialize(parse(s)) is a fixed point") {
    const ExperimentConfig cfg = tiny_config("alg1, alg2", 3);
    const std::string s1 = serialize_config(cfg);
    std::istringstream is(s1);
    const ExperimentConfig back = parse_config(is);
    CHECK(back == cfg);
    CHECK(serialize_config(back) == s1);

    // sweeps survive the round trip too
    std::istringstream sw(
        "[experiment]\nT = 100\n[sweep]\naxis = T\nvalues = 30, 60, 90\n");
    const ExperimentConfig c2 = parse_config(sw);
    CHECK(c2.sweep_axis == "T");
    CHECK(c2.sweep_values == std::vector<long>{30, 60, 90});
    std::istringstream sw2(serialize_config(c2));
    CHECK(parse_config(sw2) == c2);
}

TEST_CASE("config: every bad line is reported with its number") {
    std::istringstream is(
        "[experiment]\n"
        "algo = alg1\n"
        "bogus_key = 3\n"
        "T = not_a_number\n"
        "[mystery]\n");
    try {
        parse_config(is);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
        CHECK(msg.find("line 4") != std::string::npos);
        CHECK(msg.find("line 5") != std::string::npos);
        CHECK(msg.find("mystery") != std::string::npos);
    }
}

TEST_CASE("config: validation rejects bad sweeps and unknown names") {
    std::istringstream dec(
        "[experiment]\nT = 100\n[sweep]\naxis = T\nvalues = 90, 60\n");
    CHECK_THROWS_AS(parse_config(dec), config_error);
    std::istringstream empty_vals(
        "[experiment]\nT = 100\n[sweep]\naxis = T\nvalues =\n");
    CHECK_THROWS_AS(parse_config(empty_vals), config_error);
    std::istringstream no_axis("[experiment]\nT = 100\n[sweep]\nvalues = 10, 20, 30\n");
    CHECK_THROWS_AS(parse_config(no_axis), config_error);
    std::istringstream bad_algo("[experiment]\nalgo = alg1, alg9\n");
    CHECK_THROWS_AS(parse_config(bad_algo), config_error);
    std::istringstream dup_algo("[experiment]\nalgo = alg1, alg1\n");
    CHECK_THROWS_AS(parse_config(dup_algo), config_error);
}

TEST_CASE("config: sweep axis without values fills the default grid") {
    std::istringstream is("[experiment]\nT = 100\n[sweep]\naxis = T\n");
    const ExperimentConfig cfg = parse_config(is);
    CHECK(cfg.sweep_values.size() == 10);
    CHECK(cfg.sweep_values.back() == 100);
    for (size_t i = 1; i < cfg.sweep_values.size(); ++i)
        CHECK(cfg.sweep_values[i] > cfg.sweep_values[i - 1]);
}

TEST_CASE("config: preset expands and explicit keys still apply") {
    std::istringstream is("[experiment]\npreset = uniform-fixedM\nT = 50\nreps = 2\n");
    const ExperimentConfig cfg = parse_config(is);
    CHECK(cfg.m == 2000);
    CHECK(cfg.dist == "uniform");
    CHECK(cfg.model == InputModel::stochastic);
    CHECK(cfg.d_lo == 2.0);
    CHECK(cfg.d_hi == 3.0);
    CHECK(cfg.T == 50);
    CHECK(cfg.reps == 2);

    std::istringstream bad("[experiment]\npreset = no-such-preset\n");
    CHECK_THROWS_AS(parse_config(bad), config_error);
}

TEST_CASE("apply_paper_scale bumps the non-swept dimensions") {
    ExperimentConfig cfg = tiny_config("alg1", 2);
    apply_paper_scale(cfg);
    CHECK(cfg.m == 2000);
    CHECK(cfg.T == 5000);
    CHECK(cfg.reps == 100);

    std::istringstream sw("[experiment]\nT = 100\n[sweep]\naxis = T\nvalues = 30, 60, 90\n");
    ExperimentConfig swept = parse_config(sw);
    apply_paper_scale(swept);
    CHECK(swept.sweep_values == std::vector<long>{30, 60, 90});  // axis values kept
    CHECK(swept.m == 2000);
}

TEST_CASE("cli_run: reps=1 emits exactly the rep row and the aggregate") {
    ExperimentConfig cfg = tiny_config("alg1", 1);
    std::ostringstream out, err;
    REQUIRE(cli_run(cfg, out, err) == 0);
    const auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::string(kResultHeader));
    CHECK(fields_of(rows[1])[0] == "r001");
    CHECK(fields_of(rows[2])[0] == "aggregate");
    CHECK(err.str().find("# effective config") != std::string::npos);
}

TEST_CASE("cli_run: aggregate row carries the plain means") {
    ExperimentConfig cfg = tiny_config("alg2", 3);
    std::ostringstream out, err;
    REQUIRE(cli_run(cfg, out, err) == 0);
    const auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 5);
    double reward = 0, regret = 0, vio = 0;
    for (int i = 1; i <= 3; ++i) {
        const auto f = fields_of(rows[static_cast<size_t>(i)]);
        REQUIRE(f.size() == 16);
        reward += std::stod(f[8]);
        regret += std::stod(f[10]);
        vio += std::stod(f[12]);
    }
    const auto agg = fields_of(rows[4]);
    CHECK(std::stod(agg[8]) == doctest::Approx(reward / 3).epsilon(1e-12));
    CHECK(std::stod(agg[10]) == doctest::Approx(regret / 3).epsilon(1e-12));
    CHECK(std::stod(agg[12]) == doctest::Approx(vio / 3).epsilon(1e-12));
    CHECK(agg[7] == "9");  // master seed echoed on the aggregate row
}

TEST_CASE("cli_run: dropping a replication leaves earlier rows unchanged") {
    ExperimentConfig two = tiny_config("alg1", 2);
    ExperimentConfig three = tiny_config("alg1", 3);
    std::ostringstream o2, o3, err;
    REQUIRE(cli_run(two, o2, err) == 0);
    REQUIRE(cli_run(three, o3, err) == 0);
    const auto r2 = lines_of(o2.str()), r3 = lines_of(o3.str());
    CHECK(sans_wall(r2[1]) == sans_wall(r3[1]));
    CHECK(sans_wall(r2[2]) == sans_wall(r3[2]));
}

TEST_CASE("cli_run: single worker reproduces the default-pool bytes") {
    ExperimentConfig cfg = tiny_config("alg1, alg2, simple_gd", 4);
    std::ostringstream a, b, err;
    REQUIRE(cli_run(cfg, a, err) == 0);
    ::setenv("OSILP_THREADS", "1", 1);
    const int rc = cli_run(cfg, b, err);
    ::unsetenv("OSILP_THREADS");
    REQUIRE(rc == 0);
    const auto ra = lines_of(a.str()), rb = lines_of(b.str());
    REQUIRE(ra.size() == rb.size());
    for (size_t i = 0; i < ra.size(); ++i) CHECK(sans_wall(ra[i]) == sans_wall(rb[i]));
}

TEST_CASE("cli_run: refuses a config with a sweep section") {
    std::istringstream is(
        "[experiment]\nalgo = alg1\nT = 40\nm = 6\nq = 3\nreps = 1\n"
        "[sweep]\naxis = T\nvalues = 10, 20, 40\n");
    const ExperimentConfig cfg = parse_config(is);
    std::ostringstream out, err;
    CHECK(cli_run(cfg, out, err) == 2);
    CHECK(err.str().find("sweep") != std::string::npos);
    CHECK(out.str().empty());
}

TEST_CASE("cli_run: the effective config echo parses back to the same config") {
    ExperimentConfig cfg = tiny_config("alg1", 1);
    std::ostringstream out, err;
    REQUIRE(cli_run(cfg, out, err) == 0);
    const std::string marker = "# effective config\n";
    const size_t at = err.str().find(marker);
    REQUIRE(at != std::string::npos);
    // nothing else reaches err on a clean run, so the tail is the verbatim echo
    std::istringstream is(err.str().substr(at + marker.size()));
    CHECK(parse_config(is) == cfg);
}

TEST_CASE("cli_sweep: T sweep appends a slope row for the gated algorithm") {
    // gated decisions are budget-feasible, so their regret against the lp
    // optimum stays positive and the log-log fit always has its points
    std::istringstream is(
        "[experiment]\nalgo = alg5\nm = 6\nq = 3\nK = 5\nreps = 3\nmaster_seed = 4\n"
        "[sweep]\naxis = T\nvalues = 100, 200, 400\n");
    const ExperimentConfig cfg = parse_config(is);
    std::ostringstream out, err;
    REQUIRE(cli_sweep(cfg, out, err) == 0);
    const auto rows = lines_of(out.str());
    // 3 points * (3 reps + aggregate) + header + slope row
    REQUIRE(rows.size() == 1 + 3 * 4 + 1);
    long slopes = 0, aggregates = 0;
    for (const auto& row : rows) {
        const auto f = fields_of(row);
        if (f[0] == "slope") {
            ++slopes;
            CHECK(f[4] == "0");  // T column is unused on slope rows
            const double r2 = std::stod(f[11]);
            CHECK(r2 >= 0.0);
            CHECK(r2 <= 1.0 + 1e-12);
        }
        if (f[0] == "aggregate") ++aggregates;
    }
    CHECK(slopes == 1);
    CHECK(aggregates == 3);

    // an ungated algorithm can beat the lp benchmark at tiny scale; the
    // sweep then warns and skips the slope row instead of fitting garbage
    std::istringstream iu(
        "[experiment]\nalgo = alg1\nm = 6\nq = 3\nK = 5\nreps = 2\nmaster_seed = 4\n"
        "[sweep]\naxis = T\nvalues = 30, 60, 120\n");
    std::ostringstream uo, ue;
    REQUIRE(cli_sweep(parse_config(iu), uo, ue) == 0);
    for (const auto& row : lines_of(uo.str())) CHECK(fields_of(row)[0] != "slope");
    CHECK(ue.str().find("warning: no slope row") != std::string::npos);

    // sweeping requires an axis
    std::ostringstream out2, err2;
    CHECK(cli_sweep(tiny_config("alg1", 1), out2, err2) == 2);
}

TEST_CASE("cli_sweep: M sweep varies m and emits no slope rows") {
    std::istringstream is(
        "[experiment]\nalgo = alg1\nT = 30\nq = 3\nK = 5\nreps = 2\n"
        "[sweep]\naxis = M\nvalues = 6, 12\n");
    const ExperimentConfig cfg = parse_config(is);
    std::ostringstream out, err;
    REQUIRE(cli_sweep(cfg, out, err) == 0);
    const auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 1 + 2 * 3);
    bool saw6 = false, saw12 = false;
    for (const auto& row : rows) {
        const auto f = fields_of(row);
        if (f[0] == "slope") FAIL("no slope rows expected for an M sweep");
        if (f.size() == 16 && f[0] != "run_id") {
            if (f[5] == "6") saw6 = true;
            if (f[5] == "12") saw12 = true;
        }
    }
    CHECK(saw6);
    CHECK(saw12);
}

TEST_CASE("cli_plot: writes the four svg panels and validates its input") {
    ExperimentConfig cfg = tiny_config("alg1, alg2", 2);
    std::ostringstream out, err;
    REQUIRE(cli_run(cfg, out, err) == 0);

    const fs::path dir = fs::temp_directory_path() / "osilp_plot_test";
    fs::create_directories(dir);
    const fs::path csv = dir / "results.csv";
    {
        std::ofstream of(csv);
        of << out.str();
    }
    std::ostringstream perr;
    REQUIRE(cli_plot(csv.string(), (dir / "panel").string(), perr) == 0);
    for (const char* name : {"panel_regret.svg", "panel_regret_ratio.svg",
                             "panel_violation_projected.svg", "panel_violation_dual.svg"}) {
        CHECK(fs::exists(dir / name));
    }

    // malformed row: the error names the line
    const fs::path bad = dir / "bad.csv";
    {
        std::ofstream of(bad);
        of << kResultHeader << "\n";
        of << "r001,alg1,stochastic,uniform,40,6,3,9,1.0\n";
    }
    std::ostringstream berr;
    CHECK(cli_plot(bad.string(), (dir / "bad").string(), berr) == 2);
    CHECK(berr.str().find(":2:") != std::string::npos);

    std::ostringstream merr;
    CHECK(cli_plot((dir / "missing.csv").string(), (dir / "x").string(), merr) == 2);
    fs::remove_all(dir);
}

TEST_CASE("result rows: header text and gated algorithms report zero violation") {
    CHECK(std::string(kResultHeader) ==
          "run_id,algo,model,dist,T,m,q,seed,reward,benchmark,regret,regret_ratio,"
          "violation_projected,violation_dual,t_fast,wall_ms");
    ExperimentConfig cfg = tiny_config("alg5, alg7", 2);
    std::ostringstream out, err;
    REQUIRE(cli_run(cfg, out, err) == 0);
    for (const auto& row : lines_of(out.str())) {
        const auto f = fields_of(row);
        if (f[0] == "run_id") continue;
        REQUIRE(f.size() == 16);
        CHECK(f[12] == "0");  // exact zero, not just small
        CHECK(std::stod(f[14]) >= 1.0);  // two-stage runs report their switch step
    }
}

TEST_CASE("permutation model and every distribution parse and run") {
    for (const char* dist : {"uniform", "normal", "cauchy", "permutation-mix"}) {
        std::istringstream is(
            "[experiment]\nalgo = alg1\nmodel = permutation\ndist = " + std::string(dist) +
            "\nT = 30\nm = 6\nq = 3\nK = 5\nreps = 1\n");
        const ExperimentConfig cfg = parse_config(is);
        std::ostringstream out, err;
        REQUIRE(cli_run(cfg, out, err) == 0);
        CHECK(lines_of(out.str()).size() == 3);
    }
    std::istringstream bad("[experiment]\ndist = exotic\n");
    CHECK_THROWS_AS(parse_config(bad), config_error);
}

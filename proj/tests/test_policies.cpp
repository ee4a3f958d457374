#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "osilp/errors.hpp"
#include "osilp/policies.hpp"
#include "osilp/rng.hpp"

using namespace osilp;
using testutil::Fixture;

namespace {

// stream of T arrivals with one shared atom
Fixture uniform_atom_fixture(long T, double r0, double step) {
    std::vector<double> r;
    for (long t = 0; t < T; ++t) r.push_back(r0 - step * static_cast<double>(t));
    std::vector<Vec> atoms(static_cast<size_t>(T), Vec{1.0});
    return Fixture(1, 1, {1.0}, r, atoms, Vec{0.4});
}

Fixture random_fixture(long T, int m, int q, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> phi(static_cast<size_t>(m * q));
    for (auto& v : phi) v = rng.uniform(0.05, 1.0);
    std::vector<double> r(static_cast<size_t>(T));
    std::vector<Vec> atoms;
    for (long t = 0; t < T; ++t) {
        r[static_cast<size_t>(t)] = rng.uniform(0.0, 1.0);
        Vec a(static_cast<size_t>(m));
        for (auto& v : a) v = rng.uniform(0.0, 4.0);
        atoms.push_back(a);
    }
    Vec d(static_cast<size_t>(m));
    for (auto& v : d) v = rng.uniform(2.0, 3.0);
    return Fixture(m, q, phi, r, atoms, d);
}

}  // namespace

TEST_CASE("alg1: hand-traced step and tie rule") {
    // q=1, phi all-ones over m=2, d=(1,1) so dphi=2; arrival (r=0.5, a=(1,0))
    Fixture fx(2, 1, {1.0, 1.0}, {0.5}, {Vec{1.0, 0.0}}, Vec{1.0, 1.0});
    const Trajectory tr = run_alg1(fx.ps, 0.1, true);
    CHECK(tr.xv == Vec{1.0});
    CHECK(tr.xa == Vec{1.0});
    CHECK(tr.total_reward == 0.5);
    CHECK(tr.final_w == Vec{0.0});  // max(0 + 0.1*(1-2), 0)
    CHECK(tr.records[0].g == Vec{1.0});

    // zero dual prices: x1 = 1(r1 > 0); exact tie goes to 0
    Fixture tie(1, 1, {1.0}, {0.0, 0.7}, {Vec{1.0}, Vec{1.0}}, Vec{5.0});
    const Trajectory tt = run_alg1(tie.ps, 0.01);
    CHECK(tt.xv[0] == 0.0);
    CHECK(tt.xv[1] == 1.0);

    CHECK_THROWS_AS(run_alg1(fx.ps, 0.0), config_error);
}

TEST_CASE("alg2: quadratic equals alg1 exactly; entropy stays positive") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Fixture fx = random_fixture(120, 6, 3, seed);
        const Trajectory a = run_alg1(fx.ps, 0.05, true);
        const Trajectory b = run_alg2(fx.ps, 0.05, Potential::quadratic(), true);
        CHECK(a.xv == b.xv);
        CHECK(a.final_w == b.final_w);
        CHECK(a.total_reward == b.total_reward);
        for (size_t t = 0; t < a.records.size(); ++t) {
            CHECK(a.records[t].w == b.records[t].w);
            // recorded direction is dphi - aphi*x at every step
            const Vec want = subgrad_linear(fx.ps.dphi, fx.ps.aphi(static_cast<long>(t)),
                                            a.records[t].x_virtual);
            CHECK(b.records[t].g == want);
        }
    }

    Fixture fx = random_fixture(200, 5, 3, 77);
    const Trajectory e = run_alg2(fx.ps, 0.05, Potential::entropy(), true);
    for (const auto& rec : e.records)
        for (double w : rec.w) CHECK(w > 0.0);
    for (double w : e.final_w) CHECK(w > 0.0);
}

TEST_CASE("refine: hand step, monotone decay, guards") {
    // arrival below threshold: w2 = max(w_hat - gamma*dphi, 0)
    Fixture fx(1, 1, {1.0}, {0.2, 0.1}, {Vec{1.0}, Vec{1.0}}, Vec{0.4});
    const double gamma = 0.5;  // 1/T with T=2
    const Trajectory tr = run_refine(fx.ps, 0, Vec{1.0}, gamma, fx.ps.bphi, true);
    CHECK(tr.xv[0] == 0.0);  // 0.2 < score 1.0
    CHECK(tr.records[1].w[0] == doctest::Approx(1.0 - gamma * 0.4).epsilon(1e-15));
    CHECK(tr.final_w[0] == doctest::Approx(1.0 - 2 * gamma * 0.4).epsilon(1e-15));

    // w_hat above the optimal-weight ceiling: nothing accepted, w non-increasing
    Fixture fy = random_fixture(50, 4, 2, 3);
    const double huge = 1e6;
    const Trajectory hy = run_refine(fy.ps, 0, Vec{huge, huge}, 1.0 / 50.0, fy.ps.bphi, true);
    CHECK(hy.total_reward == 0.0);
    for (size_t t = 1; t < hy.records.size(); ++t)
        for (size_t k = 0; k < 2; ++k)
            CHECK(hy.records[t].w[k] <= hy.records[t - 1].w[k]);

    CHECK_THROWS_AS(run_refine(fx.ps, 0, Vec{-1.0}, gamma, fx.ps.bphi, false), config_error);
    CHECK_THROWS_AS(run_refine(fx.ps, 0, Vec{1.0}, gamma, Vec{-0.5}, false), config_error);
    CHECK_THROWS_AS(run_refine(fx.ps, 0, Vec{1.0}, 0.9, fx.ps.bphi, false), config_error);
}

TEST_CASE("plan_two_stage: schedule arithmetic and guards") {
    Fixture fx = uniform_atom_fixture(4, 0.2, 0.05);
    const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
    CHECK(bounds.r_bar == 0.2);
    CHECK(bounds.D_lo == doctest::Approx(0.4).epsilon(1e-15));

    const TwoStageConfig p = plan_two_stage(4, bounds, bounds.C_bar, {});
    CHECK(p.eps0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.L == 1);  // ceil(ln 2)
    CHECK(p.J == 2);  // clipped at T/(2L)
    CHECK(p.theory_J_clipped);
    CHECK(p.t_fast == 2);
    CHECK(p.eta1 == doctest::Approx(0.5 / (3.0 * 0.04)).epsilon(1e-12));
    CHECK(p.V1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.gamma_fast == doctest::Approx(1.0 / std::log(4.0)).epsilon(1e-15));
    CHECK(p.gamma_refine == 0.25);
    CHECK(p.delta_hat == doctest::Approx(0.1).epsilon(1e-12));

    TwoStageConfig over;
    over.J_override = 4;
    const TwoStageConfig p4 = plan_two_stage(4, bounds, bounds.C_bar, over);
    CHECK(p4.t_fast == 4);
    over.J_override = 5;
    CHECK_THROWS_AS(plan_two_stage(4, bounds, bounds.C_bar, over), config_error);
    CHECK_THROWS_AS(plan_two_stage(2, bounds, bounds.C_bar, {}), config_error);

    TwoStageConfig bad;
    bad.delta = 1.5;
    CHECK_THROWS_AS(plan_two_stage(4, bounds, bounds.C_bar, bad), config_error);
}

TEST_CASE("accelerate: hand simulation of one epoch, J=2") {
    Fixture fx = uniform_atom_fixture(4, 0.2, 0.05);  // rewards .2 .15 .1 .05
    const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
    const TwoStageConfig p = plan_two_stage(4, bounds, bounds.C_bar, {});

    const AccelerateResult acc = run_accelerate(fx.ps, p, true);
    // t1: x=1 (0.2>0), g = 0.4-1 = -0.6; t2: decision dual blocks (score>r), g = 0.4
    const double gf = 1.0 / std::log(4.0);
    CHECK(acc.prefix.total_reward == 0.2);
    CHECK(acc.prefix.records[0].w == Vec{0.0});
    CHECK(acc.prefix.records[1].w[0] == doctest::Approx(gf * 0.6).epsilon(1e-15));
    CHECK(acc.prefix.xv == Vec{1.0, 0.0});
    // accelerated iterate: 0 -> clamp(0 + eta*0.6 to ball(0,0.5)) = 0.5, epoch
    // average over pre-update iterates = (0 + 0.5)/2
    CHECK(acc.w_tilde[0] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(acc.budget_left[0] == doctest::Approx(4.0 * 0.4 - 1.0).epsilon(1e-15));
    CHECK(acc.t_fast == 2);

    // full two-stage: refine re-seeds at w_tilde with gamma = 1/T
    const Trajectory ts = run_two_stage(fx.ps, p, true);
    CHECK(ts.total_reward == 0.2);
    CHECK(ts.t_fast == 2);
    CHECK(ts.records[2].w[0] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(ts.records[3].w[0] == doctest::Approx(0.25 - 0.25 * 0.4).epsilon(1e-9));
    CHECK(ts.final_w[0] == doctest::Approx(0.25 - 2 * 0.25 * 0.4).epsilon(1e-9));
    for (double v : ts.proj_residual) CHECK(v <= 0.0);
}

TEST_CASE("two-stage with t_fast = T reproduces the accelerate prefix") {
    Fixture fx = uniform_atom_fixture(4, 0.2, 0.05);
    const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
    TwoStageConfig over;
    over.J_override = 4;
    const TwoStageConfig p = plan_two_stage(4, bounds, bounds.C_bar, over);
    const AccelerateResult acc = run_accelerate(fx.ps, p, false);
    const Trajectory ts = run_two_stage(fx.ps, p, false);
    CHECK(ts.total_reward == acc.prefix.total_reward);
    CHECK(ts.xa == acc.prefix.xa);
    CHECK(ts.t_fast == 4);
}

TEST_CASE("two-stage agrees with an independent scalar replay") {
    // q = 1 keeps every projection in closed form; replay the whole schedule
    // with plain arithmetic and compare trajectories
    for (uint64_t seed = 10; seed < 16; ++seed) {
        Rng rng(seed);
        const long T = 40 + static_cast<long>(rng.below(40));
        std::vector<double> r(static_cast<size_t>(T));
        std::vector<Vec> atoms;
        std::vector<double> aphi(static_cast<size_t>(T));
        for (long t = 0; t < T; ++t) {
            r[static_cast<size_t>(t)] = rng.uniform(0.0, 1.0);
            const double a = rng.uniform(0.0, 2.0);
            aphi[static_cast<size_t>(t)] = a;
            atoms.push_back(Vec{a});
        }
        const double d = rng.uniform(0.3, 0.8);
        Fixture fx(1, 1, {1.0}, r, atoms, Vec{d});
        const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
        const TwoStageConfig p = plan_two_stage(T, bounds, bounds.C_bar, {});

        // reference replay
        double w = 0.0, wt = 0.0, center = 0.0;
        double eta = p.eta1, V = p.V1;
        double B = fx.ps.bphi[0];
        double reward = 0.0;
        std::vector<double> xa_ref;
        long t = 0;
        for (long l = 0; l < p.L; ++l) {
            wt = center;
            double avg = 0.0;
            for (long j = 0; j < p.J; ++j, ++t) {
                const double xv = (r[static_cast<size_t>(t)] > aphi[static_cast<size_t>(t)] * w) ? 1.0 : 0.0;
                double xa = 0.0;
                if (xv == 1.0 && aphi[static_cast<size_t>(t)] <= B) {
                    xa = 1.0;
                    reward += r[static_cast<size_t>(t)];
                    B -= aphi[static_cast<size_t>(t)];
                }
                xa_ref.push_back(xa);
                const double g = d - aphi[static_cast<size_t>(t)] * xv;
                avg += wt;
                w = std::max(w - p.gamma_fast * g, 0.0);
                const double lo = std::max(center - V, 0.0), hi = center + V;
                wt = std::min(std::max(wt - eta * g, lo), hi);
            }
            center = avg / static_cast<double>(p.J);
            eta *= 0.5;
            V *= 0.5;
        }
        double wr = center;
        for (; t < T; ++t) {
            const double xv = (r[static_cast<size_t>(t)] > aphi[static_cast<size_t>(t)] * wr) ? 1.0 : 0.0;
            double xa = 0.0;
            if (xv == 1.0 && aphi[static_cast<size_t>(t)] <= B) {
                xa = 1.0;
                reward += r[static_cast<size_t>(t)];
                B -= aphi[static_cast<size_t>(t)];
            }
            xa_ref.push_back(xa);
            wr = std::max(wr - p.gamma_refine * (d - aphi[static_cast<size_t>(t)] * xv), 0.0);
        }

        const Trajectory ts = run_two_stage(fx.ps, p, false);
        CHECK(ts.total_reward == doctest::Approx(reward).epsilon(1e-9));
        CHECK(ts.final_w[0] == doctest::Approx(wr).epsilon(1e-7));
        REQUIRE(ts.xa.size() == xa_ref.size());
        for (size_t i = 0; i < xa_ref.size(); ++i) CHECK(ts.xa[i] == xa_ref[i]);
        CHECK(ts.proj_residual[0] == doctest::Approx(-B).epsilon(1e-9));
    }
}

TEST_CASE("budget gate: remaining budget never negative, slack budget never gates") {
    Fixture fx = random_fixture(150, 5, 3, 21);
    const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
    const TwoStageConfig p = plan_two_stage(150, bounds, bounds.C_bar, {});
    const Trajectory ts = run_two_stage(fx.ps, p, true);
    for (const auto& rec : ts.records)
        for (double b : rec.budget) CHECK(b >= 0.0);
    for (double v : ts.proj_residual) CHECK(v <= 0.0);

    // d far above consumption: gate never binds, actual == virtual
    Fixture slack(1, 1, {1.0}, {0.5, 0.4, 0.3}, {Vec{1.0}, Vec{1.0}, Vec{1.0}}, Vec{1000.0});
    const Trajectory rf = run_refine(slack.ps, 0, Vec{0.0}, 1.0 / 3.0, slack.ps.bphi, false);
    CHECK(rf.xv == rf.xa);
}

TEST_CASE("general runners: linear model collapses to the linear algorithms") {
    const LinearModel lin;
    for (uint64_t seed = 30; seed < 34; ++seed) {
        Fixture fx = random_fixture(100, 5, 3, seed);
        const Trajectory a2 = run_alg2(fx.ps, 0.08, Potential::quadratic());
        const Trajectory g2 = run_general_md(fx.ps, lin, 0.08, Potential::quadratic());
        CHECK(a2.xv == g2.xv);
        CHECK(a2.final_w == g2.final_w);
        CHECK(a2.total_reward == g2.total_reward);

        const Trajectory e2 = run_alg2(fx.ps, 0.08, Potential::entropy());
        const Trajectory ge = run_general_md(fx.ps, lin, 0.08, Potential::entropy());
        CHECK(e2.xv == ge.xv);
        CHECK(e2.final_w == ge.final_w);

        const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
        const TwoStageConfig p = plan_two_stage(100, bounds, bounds.C_bar, {});
        const Trajectory t5 = run_two_stage(fx.ps, p);
        const Trajectory t7 = run_general_two_stage(fx.ps, lin, p);
        CHECK(t5.xv == t7.xv);
        CHECK(t5.xa == t7.xa);
        CHECK(t5.final_w == t7.final_w);
        CHECK(t5.total_reward == t7.total_reward);
        CHECK(t5.t_fast == t7.t_fast);
    }
}

TEST_CASE("log-utility model: closed-form argmax drives the decisions") {
    const LogUtilityModel logu;
    Fixture fx = random_fixture(80, 4, 2, 55);
    const Trajectory tr = run_general_md(fx.ps, logu, 0.1, Potential::quadratic(), true);
    // w1 = 0: price 0 -> x maximizes f alone -> x = 1 whenever theta > 0
    CHECK(tr.records[0].x_virtual == (fx.ps.r(0) > 0.0 ? 1.0 : 0.0));
    for (size_t t = 0; t < tr.records.size(); ++t) {
        const double theta = fx.ps.r(static_cast<long>(t));
        const double price = dot(fx.ps.aphi(static_cast<long>(t)), tr.records[t].w);
        double want;
        if (theta <= 0.0) want = 0.0;
        else if (price <= 0.0) want = 1.0;
        else want = std::min(std::max(theta / price - 1.0, 0.0), 1.0);
        CHECK(tr.records[t].x_virtual == doctest::Approx(want).epsilon(1e-12));
        // reward of the actual decision: theta*ln(1+x)
        CHECK(tr.records[t].reward_collected ==
              doctest::Approx(theta * std::log1p(tr.records[t].x_actual)).epsilon(1e-12));
    }
}

TEST_CASE("simple_gd baseline: hand simulation in the full m space") {
    Fixture fx(2, 1, {1.0, 1.0}, {1.0, 0.2}, {Vec{2.0, 0.0}, Vec{0.0, 1.0}}, Vec{1.0, 1.0});
    const Trajectory tr = run_simple_gd_baseline(fx.ps, 0.5, true);
    // t1: x=1 (1>0), p2 = max(0 + .5*((2,0)-(1,1)), 0) = (0.5, 0)
    CHECK(tr.records[0].x_virtual == 1.0);
    CHECK(tr.records[1].w == Vec{0.5, 0.0});
    // t2: score = (0.5,0).(0,1) = 0 < 0.2 -> x=1; p3 = max((0.5,0)+.5*((0,1)-(1,1)),0) = (0,0)
    CHECK(tr.records[1].x_virtual == 1.0);
    CHECK(tr.final_w == Vec{0.0, 0.0});
    CHECK(tr.total_reward == 1.2);
    CHECK(tr.xv == tr.xa);  // no gate
}

TEST_CASE("policy runs are deterministic") {
    Fixture fx = random_fixture(60, 4, 2, 91);
    const DataBounds bounds = compute_bounds(fx.stream, fx.inst, fx.basis);
    const TwoStageConfig p = plan_two_stage(60, bounds, bounds.C_bar, {});
    const Trajectory a = run_two_stage(fx.ps, p);
    const Trajectory b = run_two_stage(fx.ps, p);
    CHECK(a.total_reward == b.total_reward);
    CHECK(a.final_w == b.final_w);
    CHECK(a.xa == b.xa);
}

TEST_CASE("trajectory CSV dump requires recorded state and round-trips shape") {
    Fixture fx = random_fixture(5, 3, 2, 14);
    const Trajectory bare = run_alg1(fx.ps, 0.1, false);
    std::ostringstream os;
    CHECK_THROWS_AS(dump_trajectory_csv(bare, os), config_error);
    const Trajectory rec = run_alg1(fx.ps, 0.1, true);
    dump_trajectory_csv(rec, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,x_virtual,x_actual,reward,w_1,w_2,B_1,B_2");
    long n = 0;
    for (std::string line; std::getline(is, line);) ++n;
    CHECK(n == 5);
}

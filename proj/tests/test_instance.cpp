#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "osilp/errors.hpp"
#include "osilp/instance.hpp"
#include "osilp/textio.hpp"

using namespace osilp;

TEST_CASE("gen_support: determinism, ranges, singleton") {
    const DistConfig dc = preset_uniform();
    const Support s1 = gen_support(dc, 8, 5, 123);
    const Support s2 = gen_support(dc, 8, 5, 123);
    CHECK(s1.r == s2.r);
    CHECK(s1.atoms.a == s2.atoms.a);
    for (double r : s1.r) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
    for (double a : s1.atoms.a) {
        CHECK(a >= 0.0);
        CHECK(a <= 4.0);
    }
    CHECK_THROWS_AS(gen_support(dc, 0, 5, 1), config_error);

    // K=1: every arrival equals the single pair
    DistConfig one = dc;
    one.support_K = 1;
    const ArrivalStream st = stream_stochastic(one, 50, 3, 7);
    for (long t = 0; t < st.T; ++t) {
        CHECK(st.r[static_cast<size_t>(t)] == st.support.r[0]);
        CHECK(st.atom[static_cast<size_t>(t)] == 0);
    }
}

TEST_CASE("stream_stochastic: atom frequencies match the binomial oracle") {
    DistConfig dc = preset_uniform();
    dc.support_K = 4;
    const long T = 100000;
    const ArrivalStream st = stream_stochastic(dc, T, 3, 99);
    long counts[4] = {0, 0, 0, 0};
    for (int a : st.atom) counts[a]++;
    const double p = 0.25;
    const double sigma = std::sqrt(p * (1 - p) * static_cast<double>(T));
    for (long c : counts) CHECK(std::fabs(static_cast<double>(c) - T * p) <= 3.0 * sigma);
}

TEST_CASE("stream_stochastic is reproducible and continuous mode gives distinct atoms") {
    const DistConfig dc = preset_uniform();  // support_K = 0: fresh draw per arrival
    const ArrivalStream a = stream_stochastic(dc, 64, 4, 5);
    const ArrivalStream b = stream_stochastic(dc, 64, 4, 5);
    CHECK(a.r == b.r);
    CHECK(a.atom == b.atom);
    CHECK(a.support.K == 64);
    CHECK(stream_stochastic(dc, 1, 4, 5).T == 1);
}

TEST_CASE("stream_permutation: multiset preserved, uniform over orders") {
    DistConfig dc = preset_uniform();
    dc.support_K = 6;
    const ArrivalStream base = stream_stochastic(dc, 40, 3, 21);
    const ArrivalStream sh = stream_permutation(base, 77);
    auto sorted = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(sh.atom) == sorted(base.atom));
    CHECK(sh.model == InputModel::permutation);

    // single arrival: identity
    const ArrivalStream one = stream_permutation(stream_stochastic(dc, 1, 3, 4), 9);
    CHECK(one.T == 1);

    // all 6 orders of 3 distinct items occur with frequency 1/6 +- 3 sigma
    const ArrivalStream tri = testutil::make_stream(
        1, {0.1, 0.2, 0.3}, {Vec{1.0}, Vec{2.0}, Vec{3.0}});
    std::map<std::vector<int>, long> orders;
    const long N = 100000;
    for (long i = 0; i < N; ++i)
        orders[stream_permutation(tri, static_cast<uint64_t>(i)).atom]++;
    CHECK(orders.size() == 6);
    const double p = 1.0 / 6.0;
    const double sigma = std::sqrt(p * (1 - p) * static_cast<double>(N));
    for (const auto& kv : orders)
        CHECK(std::fabs(static_cast<double>(kv.second) - N * p) <= 3.0 * sigma);
}

TEST_CASE("sample_rhs: range and guard") {
    const Vec d = sample_rhs(200, 2.0, 3.0, 31);
    for (double v : d) {
        CHECK(v >= 2.0);
        CHECK(v < 3.0);
    }
    CHECK_THROWS_AS(sample_rhs(3, 0.0, 1.0, 1), config_error);
    CHECK_THROWS_AS(sample_rhs(3, -1.0, 1.0, 1), config_error);
}

TEST_CASE("make_instance: b = T*d exactly") {
    const Instance inst = make_instance(7, Vec{2.5, 0.375});
    CHECK(inst.b[0] == 7.0 * 2.5);
    CHECK(inst.b[1] == 7.0 * 0.375);
    CHECK_THROWS_AS(make_instance(3, Vec{1.0, 0.0}), config_error);
}

TEST_CASE("perturb_rewards: zero noise, monotone, tie-breaking") {
    DistConfig dc = preset_uniform();
    dc.support_K = 2;  // plenty of exact reward ties in the stream
    const ArrivalStream st = stream_stochastic(dc, 200, 3, 8);
    const ArrivalStream same = perturb_rewards(st, 0.0, 5);
    CHECK(same.r == st.r);
    const ArrivalStream pert = perturb_rewards(st, 1e-6, 5);
    for (size_t t = 0; t < pert.r.size(); ++t) {
        CHECK(pert.r[t] >= st.r[t]);
        CHECK(pert.r[t] <= st.r[t] + 1e-6);
    }
    Vec sorted = pert.r;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("compute_bounds: constant stream and hand-checked C_bar") {
    const testutil::Fixture fx(2, 2, {1.0, 1.0, 1.0, 1.0},
                               {1.0, 1.0, 1.0},
                               {Vec{1.0, 1.0}, Vec{1.0, 1.0}, Vec{1.0, 1.0}}, Vec{1.0, 1.0});
    const DataBounds b = compute_bounds(fx.stream, fx.inst, fx.basis);
    CHECK(b.r_bar == 1.0);
    CHECK(b.a_bar == 1.0);
    CHECK(b.C_bar == 2.0);  // a^T phi = (2,2) for every arrival
    CHECK(b.D_lo == 2.0);
    CHECK(b.D_hi == 2.0);
    CHECK(b.bounded);

    // three distinct arrivals: C_bar equals the brute maximum
    const testutil::Fixture fy(2, 1, {0.5, 2.0},
                               {0.1, 0.2, 0.3},
                               {Vec{1.0, 0.0}, Vec{0.0, 3.0}, Vec{2.0, 0.5}}, Vec{1.0, 2.0});
    const DataBounds by = compute_bounds(fy.stream, fy.inst, fy.basis);
    // projections: 0.5, 6.0, 2.0 -> max 6.0
    CHECK(by.C_bar == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(by.D_lo <= by.D_hi);
    CHECK(by.a_bar == 3.0);
}

TEST_CASE("cauchy streams drop the bounded flag") {
    const DistConfig dc = preset_cauchy();
    const ArrivalStream st = stream_stochastic(dc, 16, 3, 12);
    const Instance inst = make_instance(16, sample_rhs(3, 2.0, 3.0, 1));
    BasisSpec spec;
    spec.m = 3;
    spec.q = 2;
    const DataBounds b = compute_bounds(st, inst, build_rbf_basis(spec), dc.heavy_tailed());
    CHECK_FALSE(b.bounded);
}

TEST_CASE("stream and rhs CSV round-trips are lossless") {
    DistConfig dc = preset_normal();
    dc.support_K = 5;
    const ArrivalStream st = stream_stochastic(dc, 23, 4, 3);
    std::stringstream ss;
    dump_stream_csv(st, ss);
    const ArrivalStream back = load_stream_csv(ss);
    CHECK(back.T == st.T);
    CHECK(back.m == st.m);
    CHECK(back.r == st.r);
    for (long t = 0; t < st.T; ++t) {
        const double* x = st.arrival_a(t);
        const double* y = back.arrival_a(t);
        for (int i = 0; i < st.m; ++i) CHECK(x[i] == y[i]);
    }

    const Vec d = sample_rhs(9, 0.4, 0.8, 17);
    std::stringstream ds;
    dump_rhs_csv(d, ds);
    CHECK(load_rhs_csv(ds) == d);
}

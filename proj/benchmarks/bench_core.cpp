#include <benchmark/benchmark.h>

#include "osilp/basis.hpp"
#include "osilp/instance.hpp"
#include "osilp/metrics.hpp"
#include "osilp/oracle.hpp"
#include "osilp/policies.hpp"

using namespace osilp;

namespace {

struct Fixture {
    ArrivalStream stream;
    Instance inst;
    Basis basis;
    ProjectedStream ps;
    DataBounds bounds;

    Fixture(long T, int m, int q, int K, uint64_t seed) {
        DistConfig dc = preset_uniform();
        dc.support_K = K;
        stream = stream_stochastic(dc, T, m, child_seed(seed, 1));
        inst = make_instance(T, sample_rhs(m, 2.0, 3.0, child_seed(seed, 2)));
        BasisSpec bs;
        bs.m = m;
        bs.q = q;
        basis = build_rbf_basis(bs);
        ps = make_projected(stream, basis, inst);
        bounds = compute_bounds(stream, inst, basis);
    }
};

void BM_BasisBuild(benchmark::State& state) {
    BasisSpec spec;
    spec.m = static_cast<int>(state.range(0));
    spec.q = 10;
    for (auto _ : state) benchmark::DoNotOptimize(build_rbf_basis(spec));
}
BENCHMARK(BM_BasisBuild)->Arg(200)->Arg(2000);

void BM_ProjectColumns(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    BasisSpec spec;
    spec.m = m;
    spec.q = 10;
    const Basis basis = build_rbf_basis(spec);
    Vec a(static_cast<size_t>(m));
    Rng rng(7);
    for (auto& v : a) v = rng.uniform(0.0, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(project_columns(basis, a));
}
BENCHMARK(BM_ProjectColumns)->Arg(200)->Arg(2000);

void BM_MirrorDescentRun(benchmark::State& state) {
    const Fixture fx(static_cast<long>(state.range(0)), 200, 10, 20, 11);
    const double gamma = 1.0 / std::sqrt(static_cast<double>(fx.ps.T));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_alg2(fx.ps, gamma, Potential::quadratic()));
    state.SetItemsProcessed(state.iterations() * fx.ps.T);
}
BENCHMARK(BM_MirrorDescentRun)->Arg(2000)->Arg(8000);

void BM_TwoStageRun(benchmark::State& state) {
    const Fixture fx(static_cast<long>(state.range(0)), 200, 10, 20, 11);
    const TwoStageConfig plan = plan_two_stage(fx.ps.T, fx.bounds, fx.bounds.C_bar, {});
    for (auto _ : state) benchmark::DoNotOptimize(run_two_stage(fx.ps, plan));
    state.SetItemsProcessed(state.iterations() * fx.ps.T);
}
BENCHMARK(BM_TwoStageRun)->Arg(2000)->Arg(8000);

void BM_ProjectedLp(benchmark::State& state) {
    const Fixture fx(static_cast<long>(state.range(0)), 200, 10, 20, 13);
    for (auto _ : state) benchmark::DoNotOptimize(solve_projected_lp(fx.ps));
}
BENCHMARK(BM_ProjectedLp)->Arg(500)->Arg(2000);

void BM_DualMinimize(benchmark::State& state) {
    const Fixture fx(2000, 200, static_cast<int>(state.range(0)), 20, 17);
    DualObjective obj;
    obj.build(fx.ps);
    for (auto _ : state) benchmark::DoNotOptimize(minimize_f_T_phi(obj));
}
BENCHMARK(BM_DualMinimize)->Arg(1)->Arg(10);

void BM_ViolationDualTested(benchmark::State& state) {
    const Fixture fx(2000, 200, 10, 20, 19);
    const double gamma = 1.0 / std::sqrt(static_cast<double>(fx.ps.T));
    const Trajectory traj = run_alg1(fx.ps, gamma);
    const double u_bar = default_u_bar(traj, fx.basis);
    for (auto _ : state)
        benchmark::DoNotOptimize(violation_dual_tested(traj, fx.basis, u_bar));
}
BENCHMARK(BM_ViolationDualTested);

}  // namespace

BENCHMARK_MAIN();

#pragma once
#include <utility>
#include <vector>

#include "osilp/basis.hpp"
#include "osilp/policies.hpp"

namespace osilp {

struct RunMetrics {
    double regret = 0;
    double regret_ratio = 0;  // NaN when the benchmark is not positive
    double violation_projected = 0;
    double violation_dual_tested = 0;
    double w_inf_max = 0;
};

struct Stat {
    double mean = 0, stdev = 0, ci_lo = 0, ci_hi = 0;
};

struct Aggregate {
    long n = 0;
    Stat regret, regret_ratio, violation_projected, violation_dual_tested, w_inf_max;
};

double regret(const Trajectory& traj, double benchmark_value);

// || [residual]^+ ||_2 over the q budget directions. The residual comes from
// the trajectory's own sequential budget chain, so gated runs report an
// exact zero.
double violation_projected(const Trajectory& traj);

// realized dual scale: max_t ||w_t||_inf times the largest basis column norm
double default_u_bar(const Trajectory& traj, const Basis& basis);

// max over {w >= 0, ||phi w||_2 <= u_bar} of [w' rho]^+ with rho the
// trajectory residual. Projected-gradient ascent (averaged fixed-point
// iteration) with a Dykstra projection onto orthant-intersect-ellipsoid;
// stops when the projection residual falls below 1e-8 scale, throws on
// non-convergence. Zero exactly when rho has no positive component.
double violation_dual_tested(const Trajectory& traj, const Basis& basis, double u_bar);

struct SlopeFit {
    double slope = 0, intercept = 0, r2 = 0;
    int excluded = 0;  // non-positive values dropped before the fit
};

// OLS of ln(value) on ln(T); needs >= 3 positive points
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

RunMetrics compute_run_metrics(const Trajectory& traj, double benchmark_value, const Basis& basis);

// mean, sample stdev, normal CI95 across replications (n >= 2)
Aggregate aggregate(const std::vector<RunMetrics>& reps);

}  // namespace osilp

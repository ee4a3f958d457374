#include "osilp/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "osilp/errors.hpp"

namespace osilp {

double regret(const Trajectory& traj, double benchmark_value) {
    if (!std::isfinite(benchmark_value)) throw config_error("regret: benchmark must be finite");
    return benchmark_value - traj.total_reward;
}

double violation_projected(const Trajectory& traj) { return norm2_pos(traj.proj_residual); }

double default_u_bar(const Trajectory& traj, const Basis& basis) {
    return traj.w_inf_max * vmax(basis.col_norm2);
}

namespace {

double quad_form(const Mat& Q, const Vec& z) {
    double s = 0.0;
    for (int i = 0; i < Q.rows; ++i) {
        double row = 0.0;
        for (int j = 0; j < Q.cols; ++j) row += Q(i, j) * z[static_cast<size_t>(j)];
        s += z[static_cast<size_t>(i)] * row;
    }
    return s;
}

// nearest point in {z : z'Qz <= rr}: z(nu) = (I + nu Q)^{-1} v with nu >= 0
// chosen on the boundary (secular equation, bracketed bisection)
Vec project_ellipsoid(const Vec& v, const Mat& Q, double rr) {
    const int q = Q.rows;
    if (quad_form(Q, v) <= rr) return v;
    Vec z;
    auto solve_nu = [&](double nu) {
        Mat A(q, q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + nu * Q(i, j);
        if (!cholesky_inplace(A))
            throw numeric_error("ellipsoid projection: factorization failed");
        z = v;
        cholesky_solve(A, z);
    };
    double lo = 0.0, hi = 1.0;
    bool bracketed = false;
    for (int it = 0; it < 90; ++it) {
        solve_nu(hi);
        if (quad_form(Q, z) < rr) {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 4.0;
    }
    if (!bracketed) throw numeric_error("ellipsoid projection: bracket failed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        solve_nu(mid);
        const double g = quad_form(Q, z) - rr;
        if (std::abs(g) <= 1e-13 * rr) return z;
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * (1.0 + hi)) break;
    }
    solve_nu(hi);  // inside-the-ball endpoint, feasible by construction
    return z;
}

// Dykstra between the ellipsoid and the orthant; orthant last so the
// output is exactly non-negative
Vec project_orthant_ellipsoid(const Vec& v, const Mat& Q, double rr) {
    const size_t q = v.size();
    bool nonneg = true;
    for (double s : v)
        if (s < 0.0) nonneg = false;
    if (nonneg && quad_form(Q, v) <= rr) return v;

    Vec x = v, p(q, 0.0), qc(q, 0.0), y(q, 0.0);
    const double tol = 1e-12 * (1.0 + norm2(v));
    for (long it = 0; it < 20000; ++it) {
        for (size_t j = 0; j < q; ++j) y[j] = x[j] + p[j];
        Vec e = project_ellipsoid(y, Q, rr);
        for (size_t j = 0; j < q; ++j) p[j] = y[j] - e[j];
        for (size_t j = 0; j < q; ++j) y[j] = e[j] + qc[j];
        Vec o(q);
        for (size_t j = 0; j < q; ++j) o[j] = y[j] > 0.0 ? y[j] : 0.0;
        for (size_t j = 0; j < q; ++j) qc[j] = y[j] - o[j];
        double move = 0.0;
        for (size_t j = 0; j < q; ++j) move += (o[j] - x[j]) * (o[j] - x[j]);
        x = std::move(o);
        if (std::sqrt(move) <= tol && quad_form(Q, x) <= rr * (1.0 + 1e-10)) return x;
    }
    throw numeric_error("dual-violation projection (Dykstra) did not converge in 20000 sweeps");
}

}  // namespace

double violation_dual_tested(const Trajectory& traj, const Basis& basis, double u_bar) {
    const Vec& rho = traj.proj_residual;
    if (rho.size() != static_cast<size_t>(basis.q))
        throw dim_error("violation_dual_tested: residual dimension mismatch");
    bool any_pos = false;
    for (double s : rho)
        if (s > 0.0) any_pos = true;
    if (!any_pos) return 0.0;  // no positive direction; zero without an ascent
    if (!(u_bar > 0.0)) throw config_error("violation_dual_tested: u_bar must be positive");

    if (basis.q == 1) {
        // scale the single weight to the ball boundary
        return u_bar * std::max(rho[0], 0.0) / basis.col_norm2[0];
    }

    const int q = basis.q;
    Mat Q(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = i; j < q; ++j) {
            double s = 0.0;
            for (int row = 0; row < basis.m; ++row) s += basis.phi(row, i) * basis.phi(row, j);
            Q(i, j) = s;
            Q(j, i) = s;
        }
    const double rr = u_bar * u_bar;

    // start from the positive part of rho scaled to the boundary
    Vec w(rho.size(), 0.0);
    for (size_t j = 0; j < rho.size(); ++j) w[j] = rho[j] > 0.0 ? rho[j] : 0.0;
    const double wq = quad_form(Q, w);
    if (!(wq > 0.0)) throw numeric_error("violation_dual_tested: degenerate basis Gram matrix");
    const double init_scale = u_bar / std::sqrt(wq);
    for (double& s : w) s *= init_scale;

    const double step = u_bar / (1.0 + norm2(rho));
    const double tol = 1e-8 * (1.0 + u_bar);
    Vec y(rho.size(), 0.0);
    double move = 0.0;
    const long cap = 200000;
    long it = 0;
    for (; it < cap; ++it) {
        for (size_t j = 0; j < rho.size(); ++j) y[j] = w[j] + step * rho[j];
        Vec pw = project_orthant_ellipsoid(y, Q, rr);
        move = 0.0;
        for (size_t j = 0; j < rho.size(); ++j) move += (pw[j] - w[j]) * (pw[j] - w[j]);
        move = std::sqrt(move);
        if (move <= tol) {
            w = std::move(pw);
            break;
        }
        // averaged update keeps the nonexpansive fixed-point iteration convergent
        for (size_t j = 0; j < rho.size(); ++j) w[j] = 0.5 * (w[j] + pw[j]);
    }
    if (it >= cap) {
        std::ostringstream msg;
        msg << "violation_dual_tested: ascent not stationary after " << cap
            << " iterations (residual " << move << ", u_bar " << u_bar << ")";
        throw numeric_error(msg.str());
    }
    const double val = dot(w, rho);
    return val > 0.0 ? val : 0.0;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    std::vector<std::pair<double, double>> pts;
    int excluded = 0;
    for (const auto& [T, v] : points) {
        if (!(T > 0.0)) throw config_error("fit_loglog_slope: T must be positive");
        if (v > 0.0)
            pts.emplace_back(std::log(T), std::log(v));
        else
            ++excluded;  // cannot take logs; dropped, caller surfaces the count
    }
    if (pts.size() < 3)
        throw config_error("fit_loglog_slope: need at least 3 points with positive values");
    const double n = static_cast<double>(pts.size());
    double xbar = 0.0, ybar = 0.0;
    for (const auto& [x, y] : pts) {
        xbar += x;
        ybar += y;
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    if (!(sxx > 0.0)) throw config_error("fit_loglog_slope: needs at least two distinct T values");
    SlopeFit fit;
    fit.excluded = excluded;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ssres = 0.0, sstot = 0.0;
    for (const auto& [x, y] : pts) {
        const double e = y - (fit.intercept + fit.slope * x);
        ssres += e * e;
        sstot += (y - ybar) * (y - ybar);
    }
    fit.r2 = sstot > 0.0 ? 1.0 - ssres / sstot : 1.0;
    return fit;
}

RunMetrics compute_run_metrics(const Trajectory& traj, double benchmark_value,
                               const Basis& basis) {
    RunMetrics m;
    m.regret = regret(traj, benchmark_value);
    m.regret_ratio = benchmark_value > 0.0 ? m.regret / benchmark_value
                                           : std::numeric_limits<double>::quiet_NaN();
    m.violation_projected = violation_projected(traj);
    m.w_inf_max = traj.w_inf_max;
    if (m.violation_projected == 0.0) {
        m.violation_dual_tested = 0.0;  // residual <= 0 everywhere, nothing to ascend
    } else {
        m.violation_dual_tested = violation_dual_tested(traj, basis, default_u_bar(traj, basis));
    }
    return m;
}

namespace {

Stat stat_of(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    Stat s;
    s.mean = mean;
    s.stdev = std::sqrt(ss / (n - 1.0));
    const double half = 1.96 * s.stdev / std::sqrt(n);
    s.ci_lo = mean - half;
    s.ci_hi = mean + half;
    return s;
}

}  // namespace

Aggregate aggregate(const std::vector<RunMetrics>& reps) {
    if (reps.size() < 2) throw config_error("aggregate: need at least 2 replications");
    Aggregate agg;
    agg.n = static_cast<long>(reps.size());
    std::vector<double> xs(reps.size());
    auto fill = [&](double RunMetrics::*field) {
        for (size_t i = 0; i < reps.size(); ++i) xs[i] = reps[i].*field;
        return stat_of(xs);
    };
    agg.regret = fill(&RunMetrics::regret);
    agg.regret_ratio = fill(&RunMetrics::regret_ratio);
    agg.violation_projected = fill(&RunMetrics::violation_projected);
    agg.violation_dual_tested = fill(&RunMetrics::violation_dual_tested);
    agg.w_inf_max = fill(&RunMetrics::w_inf_max);
    return agg;
}

}  // namespace osilp

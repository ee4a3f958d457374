#pragma once
#include <iosfwd>

#include "osilp/policies.hpp"

// Offline benchmarks. The projected LP optimum and T times the sample-dual
// minimum coincide by strong duality; the two sides are computed by
// independent engines (bounded-variable simplex vs subgradient descent with
// a cut-based polish) and cross-checked in the tests.

namespace osilp {

// Sample dual objective with arrivals collapsed into distinct
// (reward, projected column) classes, so kinks shared by duplicate
// arrivals are handled once with their full weight.
struct DualObjective {
    int q = 0;
    Vec dphi;
    double box_ub = 0;  // r_bar / D_lo; the box [0, box_ub]^q contains every minimizer
    double f0 = 0;      // value at w = 0

    std::vector<double> weight;  // class weights, sum to 1
    Vec r;                       // class rewards
    std::vector<Vec> aphi;       // class projected columns

    static DualObjective build(const ProjectedStream& ps);
    // exact-expectation analogue over a finite support with probabilities
    static DualObjective build_fluid(const Support& support, const Vec& probs, const Basis& basis,
                                     const Vec& d);

    double value(const Vec& w) const;
    // subgradient takes the zero branch at kinks, matching the decision tie rule
    double value_subgrad(const Vec& w, Vec& g) const;
};

struct MinimizeResult {
    Vec w;
    double value = 0;
    long iters = 0;         // objective evaluations spent
    bool best_effort = false;  // non-finite data; value is advisory
};

// Projected subgradient over the box (step c/sqrt(k) with c = box_ub,
// averaged iterate folded in), then a central-cut polish phase; the plain
// method alone stalls around 1e-4 relative on binding instances, the
// polish closes the gap to ~1e-12. q = 1 uses an exact breakpoint scan.
MinimizeResult minimize_f_T_phi(const DualObjective& obj, long iters = 200000, double tol = 1e-9);

MinimizeResult minimize_f_phi(const Support& support, const Vec& probs, const Basis& basis,
                              const Vec& d, long iters = 200000, double tol = 1e-9);

struct LpResult {
    double value = 0;
    Vec x;  // T entries in [0,1]
    long pivots = 0;
};

// max r^T x  s.t.  (projected columns) x <= b^T phi, 0 <= x <= 1.
// Bounded-variable revised simplex, Dantzig pricing with a Bland fallback
// once degenerate pivots pile up. Scale guard: q <= 64, T <= 1e5.
LpResult solve_projected_lp(const ProjectedStream& ps);

// Exhaustive vertex enumeration for tiny LPs: max r^T x s.t. rows*x <= rhs,
// 0 <= x <= 1. Guard: T <= 6 and at most 4 rows.
double brute_force_lp(const std::vector<Vec>& rows, const Vec& rhs, const Vec& r);

// Threshold decisions from a fixed dual; scores within the relative tie
// band of the reward resolve to 0.
Vec recover_primal_threshold(const ProjectedStream& ps, const Vec& w_star, double tie_rtol = 1e-9);

struct BenchmarkReport {
    double r_phi_star = 0;  // projected LP optimum
    double dual_value = 0;  // T * f(w_hat)
    double gap = 0;         // dual_value - r_phi_star, >= -tol by weak duality
    Vec w_hat;
    Vec x_star;
    long lp_pivots = 0;
    long dual_iters = 0;
    const char* lp_method = "bounded-simplex";
    const char* dual_method = "subgrad-polish";
};

BenchmarkReport benchmark(const ProjectedStream& ps);

// header + one row: r_phi_star,dual_value,gap,lp_pivots,dual_iters
void dump_benchmark_csv(const BenchmarkReport& rep, std::ostream& os);
// `j,w_j` rows, 1-based
void dump_w_csv(const Vec& w, std::ostream& os);

}  // namespace osilp

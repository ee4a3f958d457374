#pragma once
#include "osilp/la.hpp"

// Dual-weight update machinery: subgradients of the sample dual objective,
// coordinate-separable potentials with closed-form mirror maps, Bregman
// divergences, and the projection onto orthant-intersect-ball used by the
// epoch-restarted stage.

namespace osilp {

struct Potential {
    enum class Kind { quadratic, entropy };
    Kind kind = Kind::quadratic;

    // psi, psi', and (psi')^{-1} per coordinate.
    double value(double u) const;
    double dvalue(double u) const;
    double inv_dvalue(double v) const;

    double alpha_sc() const { return 1.0; }               // strong-convexity constant
    bool strictly_positive_domain() const { return kind == Kind::entropy; }

    static Potential quadratic() { return Potential{Kind::quadratic}; }
    static Potential entropy() { return Potential{Kind::entropy}; }

    // Entropy's domain excludes 0; the all-zero start is replaced by this.
    static constexpr double kEntropyStart = 1e-6;
};

// g = dphi - x * aphi, the subgradient of one arrival's dual term.
Vec subgrad_linear(const Vec& dphi, const Vec& aphi, double x);

// Componentwise max(w - gamma*g, 0).
Vec gd_step(const Vec& w, const Vec& g, double gamma);

// argmin_{w>=0} { <gamma*g, w> + D_psi(w || w_prev) }, solved per coordinate
// via v_j = psi'(w_j) - gamma*g_j followed by the clamped inverse map.
// Quadratic reproduces gd_step arithmetic exactly; entropy multiplies by
// exp(-gamma*g_j) and never clamps.
Vec mirror_step(const Vec& w, const Vec& g, double gamma, const Potential& psi);

double bregman(const Potential& psi, const Vec& u, const Vec& v);

// Euclidean projection onto {v >= 0} I {||v - center||_2 <= radius} by
// Dykstra's alternating projections. `center` must be >= 0 and radius > 0.
Vec project_ball_nonneg(const Vec& w, const Vec& center, double radius, double tol = 1e-10,
                        int max_iter = 10000);

// Iterate-norm ceilings used as hard run-time invariants on bounded data.
// Plain-gradient run:   (q*(C+D)^2 + 2*r_bar) / (2*D_lo) + q*(C+D)
// General-model run:    (q*(G+D)^2 + 4*F_bar) / (2*D_lo) + q*(G+D)
// Optimal dual weight:  sqrt(q) * r_bar / D_lo
double gd_iterate_bound(int q, double C_bar, double D_hi, double r_bar, double D_lo);
double general_iterate_bound(int q, double G_bar, double D_hi, double F_bar, double D_lo);
double optimal_weight_bound(int q, double r_bar, double D_lo);

}  // namespace osilp

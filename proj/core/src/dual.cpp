#include "osilp/dual.hpp"

#include <cmath>
#include <string>

#include "osilp/errors.hpp"

namespace osilp {

double Potential::value(double u) const {
    switch (kind) {
        case Kind::quadratic: return 0.5 * u * u;
        case Kind::entropy:
            if (u < 0.0) throw config_error("entropy potential: u must be >= 0");
            return u == 0.0 ? 0.0 : u * std::log(u);  // negative entropy, convex
    }
    return 0.0;
}

double Potential::dvalue(double u) const {
    switch (kind) {
        case Kind::quadratic: return u;
        case Kind::entropy:
            if (u <= 0.0) throw config_error("entropy potential: derivative needs u > 0");
            return std::log(u) + 1.0;
    }
    return 0.0;
}

double Potential::inv_dvalue(double v) const {
    switch (kind) {
        case Kind::quadratic: return v;
        case Kind::entropy: return std::exp(v - 1.0);
    }
    return 0.0;
}

Vec subgrad_linear(const Vec& dphi, const Vec& aphi, double x) {
    if (dphi.size() != aphi.size()) throw dim_error("subgrad_linear: size mismatch");
    Vec g(dphi.size());
    for (size_t j = 0; j < dphi.size(); ++j) g[j] = dphi[j] - x * aphi[j];
    return g;
}

Vec gd_step(const Vec& w, const Vec& g, double gamma) {
    if (w.size() != g.size()) throw dim_error("gd_step: size mismatch");
    Vec out(w.size());
    for (size_t j = 0; j < w.size(); ++j) out[j] = std::max(w[j] - gamma * g[j], 0.0);
    return out;
}

Vec mirror_step(const Vec& w, const Vec& g, double gamma, const Potential& psi) {
    if (w.size() != g.size()) throw dim_error("mirror_step: size mismatch");
    Vec out(w.size());
    switch (psi.kind) {
        case Potential::Kind::quadratic:
            for (size_t j = 0; j < w.size(); ++j) out[j] = std::max(w[j] - gamma * g[j], 0.0);
            break;
        case Potential::Kind::entropy:
            for (size_t j = 0; j < w.size(); ++j) {
                if (w[j] <= 0.0)
                    throw config_error("mirror_step: entropy potential needs strictly positive w");
                out[j] = w[j] * std::exp(-gamma * g[j]);
            }
            break;
    }
    return out;
}

double bregman(const Potential& psi, const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw dim_error("bregman: size mismatch");
    switch (psi.kind) {
        case Potential::Kind::quadratic: {
            double s = 0.0;
            for (size_t j = 0; j < u.size(); ++j) {
                const double d = u[j] - v[j];
                s += 0.5 * d * d;
            }
            return s;
        }
        case Potential::Kind::entropy: {
            // KL divergence: sum u*log(u/v) - u + v, with 0*log(0) = 0.
            double s = 0.0;
            for (size_t j = 0; j < u.size(); ++j) {
                if (u[j] < 0.0 || v[j] <= 0.0) throw config_error("bregman: entropy domain violation");
                if (u[j] > 0.0) s += u[j] * std::log(u[j] / v[j]);
                s += v[j] - u[j];
            }
            return s;
        }
    }
    return 0.0;
}

namespace {

void proj_orthant(Vec& v) {
    for (double& x : v) x = std::max(x, 0.0);
}

void proj_ball(Vec& v, const Vec& c, double radius) {
    double d2 = 0.0;
    for (size_t j = 0; j < v.size(); ++j) {
        const double z = v[j] - c[j];
        d2 += z * z;
    }
    const double d = std::sqrt(d2);
    if (d <= radius) return;
    const double s = radius / d;
    for (size_t j = 0; j < v.size(); ++j) v[j] = c[j] + s * (v[j] - c[j]);
}

bool feasible(const Vec& v, const Vec& c, double radius, double tol) {
    double d2 = 0.0;
    for (size_t j = 0; j < v.size(); ++j) {
        if (v[j] < 0.0) return false;
        const double z = v[j] - c[j];
        d2 += z * z;
    }
    return std::sqrt(d2) <= radius + tol;
}

}  // namespace

Vec project_ball_nonneg(const Vec& w, const Vec& center, double radius, double tol, int max_iter) {
    if (w.size() != center.size()) throw dim_error("project_ball_nonneg: size mismatch");
    if (!(radius > 0.0)) throw config_error("project_ball_nonneg: radius must be > 0");
    for (double c : center)
        if (c < 0.0) throw config_error("project_ball_nonneg: center must be >= 0");

    if (feasible(w, center, radius, 0.0)) return w;

    const size_t n = w.size();
    Vec x = w, p(n, 0.0), qcorr(n, 0.0), y(n), prev(n);
    for (int it = 0; it < max_iter; ++it) {
        prev = x;
        // ball half-step with its correction
        y = x;
        for (size_t j = 0; j < n; ++j) y[j] += p[j];
        Vec before = y;
        proj_ball(y, center, radius);
        for (size_t j = 0; j < n; ++j) p[j] = before[j] - y[j];
        // orthant half-step with its correction
        x = y;
        for (size_t j = 0; j < n; ++j) x[j] += qcorr[j];
        before = x;
        proj_orthant(x);
        for (size_t j = 0; j < n; ++j) qcorr[j] = before[j] - x[j];

        double move = 0.0;
        for (size_t j = 0; j < n; ++j) {
            const double z = x[j] - prev[j];
            move += z * z;
        }
        if (std::sqrt(move) <= tol && feasible(x, center, radius, tol)) return x;
    }
    throw numeric_error("project_ball_nonneg: Dykstra did not converge within " +
                        std::to_string(max_iter) + " iterations (radius " + std::to_string(radius) +
                        ")");
}

double gd_iterate_bound(int q, double C_bar, double D_hi, double r_bar, double D_lo) {
    const double cd = C_bar + D_hi;
    return (q * cd * cd + 2.0 * r_bar) / (2.0 * D_lo) + q * cd;
}

double general_iterate_bound(int q, double G_bar, double D_hi, double F_bar, double D_lo) {
    const double gd = G_bar + D_hi;
    return (q * gd * gd + 4.0 * F_bar) / (2.0 * D_lo) + q * gd;
}

double optimal_weight_bound(int q, double r_bar, double D_lo) {
    return std::sqrt(static_cast<double>(q)) * r_bar / D_lo;
}

}  // namespace osilp

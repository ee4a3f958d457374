#include "osilp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <utility>

#include "osilp/errors.hpp"
#include "osilp/textio.hpp"

namespace osilp {

namespace {

void finalize(DualObjective& o) {
    double f0 = 0.0;
    double rbar = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < o.r.size(); ++c) {
        if (o.r[c] > 0.0) f0 += o.weight[c] * o.r[c];
        if (o.r[c] > rbar) rbar = o.r[c];
    }
    o.f0 = f0;
    const double dlo = vmin(o.dphi);
    o.box_ub = (rbar > 0.0 && dlo > 0.0) ? rbar / dlo : 0.0;
}

}  // namespace

DualObjective DualObjective::build(const ProjectedStream& ps) {
    DualObjective o;
    o.q = ps.q;
    o.dphi = ps.dphi;
    // map keeps class order deterministic: sorted by (atom, reward)
    std::map<std::pair<int, double>, long> groups;
    for (long t = 0; t < ps.T; ++t)
        ++groups[{ps.stream->atom[static_cast<size_t>(t)], ps.r(t)}];
    const double scale = 1.0 / static_cast<double>(ps.T);
    o.weight.reserve(groups.size());
    o.r.reserve(groups.size());
    o.aphi.reserve(groups.size());
    for (const auto& [key, count] : groups) {
        o.weight.push_back(static_cast<double>(count) * scale);
        o.r.push_back(key.second);
        o.aphi.push_back(ps.atom_phi[static_cast<size_t>(key.first)]);
    }
    finalize(o);
    return o;
}

DualObjective DualObjective::build_fluid(const Support& support, const Vec& probs,
                                         const Basis& basis, const Vec& d) {
    if (probs.size() != static_cast<size_t>(support.K))
        throw dim_error("build_fluid: probability vector size must equal support size");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw config_error("build_fluid: probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw config_error("build_fluid: probabilities must sum to 1");
    DualObjective o;
    o.q = basis.q;
    o.dphi = project_columns(basis, d);
    for (int k = 0; k < support.K; ++k) {
        if (probs[static_cast<size_t>(k)] == 0.0) continue;
        o.weight.push_back(probs[static_cast<size_t>(k)]);
        o.r.push_back(support.r[static_cast<size_t>(k)]);
        const double* row = support.atoms.row(k);
        Vec a(row, row + support.m);
        o.aphi.push_back(project_columns(basis, a));
    }
    finalize(o);
    return o;
}

double DualObjective::value(const Vec& w) const {
    double acc = dot(dphi, w);
    for (size_t c = 0; c < r.size(); ++c) {
        const double s = r[c] - dot(aphi[c], w);
        if (s > 0.0) acc += weight[c] * s;
    }
    return acc;
}

double DualObjective::value_subgrad(const Vec& w, Vec& g) const {
    g = dphi;
    double acc = dot(dphi, w);
    for (size_t c = 0; c < r.size(); ++c) {
        const double s = r[c] - dot(aphi[c], w);
        if (s > 0.0) {  // zero branch exactly at the kink
            acc += weight[c] * s;
            for (size_t j = 0; j < g.size(); ++j) g[j] -= weight[c] * aphi[c][j];
        }
    }
    return acc;
}

namespace {

void clamp_box(Vec& w, double ub) {
    for (double& v : w) {
        if (v < 0.0) v = 0.0;
        if (v > ub) v = ub;
    }
}

}  // namespace

MinimizeResult minimize_f_T_phi(const DualObjective& obj, long iters, double tol) {
    if (iters < 1) throw config_error("minimize_f_T_phi: iters must be >= 1");
    const size_t q = static_cast<size_t>(obj.q);
    MinimizeResult res;
    res.w.assign(q, 0.0);
    res.value = obj.f0;
    if (!std::isfinite(obj.f0) || !std::isfinite(obj.box_ub)) {
        res.best_effort = true;
        return res;
    }
    // all rewards <= 0: the positive part vanishes at w = 0 and the linear
    // term only grows, so zero is optimal
    if (obj.box_ub <= 0.0 || obj.f0 <= 0.0) return res;

    if (q == 1) {
        // piecewise-linear in one variable: the minimum sits at a kink or
        // an endpoint, scan them all
        std::vector<double> pts{0.0, obj.box_ub};
        for (size_t c = 0; c < obj.r.size(); ++c) {
            const double a = obj.aphi[c][0];
            if (a != 0.0) {
                const double w1 = obj.r[c] / a;
                if (w1 > 0.0 && w1 < obj.box_ub) pts.push_back(w1);
            }
        }
        std::sort(pts.begin(), pts.end());
        Vec w(1);
        for (double p : pts) {
            w[0] = p;
            const double v = obj.value(w);
            ++res.iters;
            if (v < res.value) {
                res.value = v;
                res.w = w;
            }
        }
        return res;
    }

    Vec w(q, 0.0), g(q, 0.0), wsum(q, 0.0), aw(q, 0.0);
    double best = obj.f0;
    Vec bestw(q, 0.0);
    long used = 0;
    long since_improve = 0;
    const double c0 = obj.box_ub;  // step scale c/sqrt(k)
    for (long k = 1; used < iters; ++k) {
        const double f = obj.value_subgrad(w, g);
        ++used;
        if (f < best - 1e-13 * (1.0 + std::abs(best)))
            since_improve = 0;
        else
            ++since_improve;
        if (f < best) {
            best = f;
            bestw = w;
        }
        for (size_t j = 0; j < q; ++j) wsum[j] += w[j];
        if (k % 50 == 0 && used < iters) {
            for (size_t j = 0; j < q; ++j) aw[j] = wsum[j] / static_cast<double>(k);
            const double fa = obj.value(aw);
            ++used;
            if (fa < best - 1e-13 * (1.0 + std::abs(best))) since_improve = 0;
            if (fa < best) {
                best = fa;
                bestw = aw;
            }
        }
        if (since_improve > 600) break;  // stalled; hand over to the polish phase
        const double step = c0 / std::sqrt(static_cast<double>(k));
        for (size_t j = 0; j < q; ++j) w[j] -= step * g[j];
        clamp_box(w, obj.box_ub);
    }

    // central-cut polish: ball around the box, feasibility cuts outside it,
    // objective cuts inside; terminates well past the volume needed for
    // ~1e-12 relative accuracy at these dimensions
    if (used < iters) {
        const double half = 0.5 * obj.box_ub;
        const double qd = static_cast<double>(q);
        Vec x(q, half);
        Mat P(static_cast<int>(q), static_cast<int>(q));
        const double diag0 = qd * half * half * 1.01;
        for (size_t i = 0; i < q; ++i) P(static_cast<int>(i), static_cast<int>(i)) = diag0;
        const double scale_back = qd * qd / (qd * qd - 1.0);
        const long max_polish = 2 * static_cast<long>(qd * (qd + 1.0)) * 45 + 200;
        Vec Pg(q, 0.0), gt(q, 0.0);
        for (long it = 0; it < max_polish && used < iters; ++it) {
            int viol = -1;
            double sign = 1.0;
            for (size_t j = 0; j < q; ++j) {
                if (x[j] < 0.0) {
                    viol = static_cast<int>(j);
                    sign = -1.0;
                    break;
                }
                if (x[j] > obj.box_ub) {
                    viol = static_cast<int>(j);
                    sign = 1.0;
                    break;
                }
            }
            if (viol >= 0) {
                std::fill(gt.begin(), gt.end(), 0.0);
                gt[static_cast<size_t>(viol)] = sign;
            } else {
                const double f = obj.value_subgrad(x, gt);
                ++used;
                if (f < best) {
                    best = f;
                    bestw = x;
                }
                if (!(norm2(gt) > 0.0)) break;  // exact zero subgradient: global minimum
            }
            double quad = 0.0;
            for (size_t i = 0; i < q; ++i) {
                double s = 0.0;
                for (size_t j = 0; j < q; ++j) s += P(static_cast<int>(i), static_cast<int>(j)) * gt[j];
                Pg[i] = s;
            }
            quad = dot(gt, Pg);
            if (!(quad > 0.0) || !std::isfinite(quad)) break;
            const double denom = std::sqrt(quad);
            for (size_t i = 0; i < q; ++i) x[i] -= Pg[i] / ((qd + 1.0) * denom);
            const double coef = 2.0 / ((qd + 1.0) * quad);
            for (size_t i = 0; i < q; ++i)
                for (size_t j = 0; j < q; ++j)
                    P(static_cast<int>(i), static_cast<int>(j)) =
                        scale_back *
                        (P(static_cast<int>(i), static_cast<int>(j)) - coef * Pg[i] * Pg[j]);
            double maxd = 0.0;
            bool ok = true;
            for (size_t i = 0; i < q; ++i) {
                for (size_t j = i + 1; j < q; ++j) {
                    const double s =
                        0.5 * (P(static_cast<int>(i), static_cast<int>(j)) +
                               P(static_cast<int>(j), static_cast<int>(i)));
                    P(static_cast<int>(i), static_cast<int>(j)) = s;
                    P(static_cast<int>(j), static_cast<int>(i)) = s;
                }
                const double dii = P(static_cast<int>(i), static_cast<int>(i));
                if (!std::isfinite(dii) || dii <= 0.0) ok = false;
                if (dii > maxd) maxd = dii;
            }
            if (!ok) break;
            if (std::sqrt(maxd) <= tol) break;  // localization radius below the target
        }
    }
    res.w = std::move(bestw);
    res.value = best;
    res.iters = used;
    return res;
}

MinimizeResult minimize_f_phi(const Support& support, const Vec& probs, const Basis& basis,
                              const Vec& d, long iters, double tol) {
    DualObjective obj = DualObjective::build_fluid(support, probs, basis, d);
    return minimize_f_T_phi(obj, iters, tol);
}

namespace {

constexpr int kStatusLo = 0, kStatusUp = 1, kStatusBasic = 2;

struct Simplex {
    const ProjectedStream& ps;
    long T;
    int q;
    Vec u;  // rhs, b^T phi
    std::vector<int8_t> status;
    std::vector<int> basis;    // var per row
    std::vector<long> in_row;  // row per var, -1 if nonbasic
    Mat binv;
    Vec xb;
    long pivots = 0, basis_changes = 0, degen = 0;
    bool bland = false;
    double dj_tol, feas_tol;

    explicit Simplex(const ProjectedStream& s)
        : ps(s), T(s.T), q(s.q), u(s.bphi), status(static_cast<size_t>(s.T + s.q), kStatusLo),
          basis(static_cast<size_t>(s.q)), in_row(static_cast<size_t>(s.T + s.q), -1),
          binv(s.q, s.q), xb(s.bphi) {
        for (int j = 0; j < q; ++j) {
            basis[static_cast<size_t>(j)] = static_cast<int>(T) + j;
            status[static_cast<size_t>(T + j)] = kStatusBasic;
            in_row[static_cast<size_t>(T + j)] = j;
            binv(j, j) = 1.0;
        }
        double rmax = 0.0;
        for (long t = 0; t < T; ++t) rmax = std::max(rmax, std::abs(ps.r(t)));
        dj_tol = 1e-9 * (1.0 + rmax);
        feas_tol = 1e-9 * (1.0 + norm_inf(u));
    }

    double cost(long var) const { return var < T ? ps.r(var) : 0.0; }
    double upper(long var) const {
        return var < T ? 1.0 : std::numeric_limits<double>::infinity();
    }
    // reduced cost given duals y
    double reduced(long var, const Vec& y) const {
        if (var < T) return ps.r(var) - dot(ps.aphi(var), y);
        return -y[static_cast<size_t>(var - T)];
    }
    void column(long var, Vec& out) const {
        if (var < T) {
            out = ps.aphi(var);
        } else {
            out.assign(static_cast<size_t>(q), 0.0);
            out[static_cast<size_t>(var - T)] = 1.0;
        }
    }

    void refactor() {
        Mat B(q, q);
        Vec col;
        for (int i = 0; i < q; ++i) {
            column(basis[static_cast<size_t>(i)], col);
            for (int row = 0; row < q; ++row) B(row, i) = col[static_cast<size_t>(row)];
        }
        // Gauss-Jordan inversion with partial pivoting
        Mat inv(q, q);
        for (int i = 0; i < q; ++i) inv(i, i) = 1.0;
        for (int k = 0; k < q; ++k) {
            int piv = k;
            double pv = std::abs(B(k, k));
            for (int i = k + 1; i < q; ++i)
                if (std::abs(B(i, k)) > pv) {
                    pv = std::abs(B(i, k));
                    piv = i;
                }
            if (pv < 1e-12) throw numeric_error("simplex refactor: singular basis");
            if (piv != k)
                for (int j = 0; j < q; ++j) {
                    std::swap(B(k, j), B(piv, j));
                    std::swap(inv(k, j), inv(piv, j));
                }
            const double s = 1.0 / B(k, k);
            for (int j = 0; j < q; ++j) {
                B(k, j) *= s;
                inv(k, j) *= s;
            }
            for (int i = 0; i < q; ++i) {
                if (i == k) continue;
                const double f = B(i, k);
                if (f == 0.0) continue;
                for (int j = 0; j < q; ++j) {
                    B(i, j) -= f * B(k, j);
                    inv(i, j) -= f * inv(k, j);
                }
            }
        }
        binv = std::move(inv);
        recompute_xb();
    }

    void recompute_xb() {
        Vec rhs = u;
        Vec col;
        for (long var = 0; var < T; ++var) {
            if (status[static_cast<size_t>(var)] != kStatusUp) continue;
            const Vec& aphi = ps.aphi(var);
            for (int j = 0; j < q; ++j) rhs[static_cast<size_t>(j)] -= aphi[static_cast<size_t>(j)];
        }
        for (int i = 0; i < q; ++i) {
            double s = 0.0;
            for (int j = 0; j < q; ++j) s += binv(i, j) * rhs[static_cast<size_t>(j)];
            xb[static_cast<size_t>(i)] = s;
        }
    }

    LpResult run() {
        const long cap = 20000 + 50 * (T + static_cast<long>(q));
        Vec y(static_cast<size_t>(q), 0.0), alpha(static_cast<size_t>(q), 0.0), ecol;
        while (pivots < cap) {
            // duals y = cB^T binv
            for (int j = 0; j < q; ++j) {
                double s = 0.0;
                for (int i = 0; i < q; ++i) s += cost(basis[static_cast<size_t>(i)]) * binv(i, j);
                y[static_cast<size_t>(j)] = s;
            }
            // pricing
            long enter = -1;
            double bestscore = dj_tol;
            for (long var = 0; var < T + q; ++var) {
                const int8_t st = status[static_cast<size_t>(var)];
                if (st == kStatusBasic) continue;
                const double dj = reduced(var, y);
                const bool improving = (st == kStatusLo && dj > dj_tol) ||
                                       (st == kStatusUp && dj < -dj_tol);
                if (!improving) continue;
                if (bland) {
                    enter = var;
                    break;
                }
                if (std::abs(dj) > bestscore) {
                    bestscore = std::abs(dj);
                    enter = var;
                }
            }
            if (enter < 0) break;  // optimal

            const double sgn = status[static_cast<size_t>(enter)] == kStatusLo ? 1.0 : -1.0;
            column(enter, ecol);
            for (int i = 0; i < q; ++i) {
                double s = 0.0;
                for (int j = 0; j < q; ++j) s += binv(i, j) * ecol[static_cast<size_t>(j)];
                alpha[static_cast<size_t>(i)] = s;
            }

            // ratio test: entering moves by delta >= 0, basics change by -sgn*alpha*delta
            double limit = upper(enter);  // own bound span (lower is 0 everywhere)
            double delta = limit;
            long leave_row = -1;
            bool leave_at_upper = false;
            double leave_alpha = 0.0;
            for (int i = 0; i < q; ++i) {
                const double coef = sgn * alpha[static_cast<size_t>(i)];
                if (coef > 1e-11) {
                    const double ti = xb[static_cast<size_t>(i)] / coef;
                    if (ti < delta - 1e-12 ||
                        (ti < delta + 1e-12 && leave_row >= 0 &&
                         std::abs(alpha[static_cast<size_t>(i)]) > std::abs(leave_alpha))) {
                        delta = std::max(ti, 0.0);
                        leave_row = i;
                        leave_at_upper = false;
                        leave_alpha = alpha[static_cast<size_t>(i)];
                    }
                } else if (coef < -1e-11) {
                    const double ub = upper(basis[static_cast<size_t>(i)]);
                    if (!std::isfinite(ub)) continue;
                    const double ti = (ub - xb[static_cast<size_t>(i)]) / (-coef);
                    if (ti < delta - 1e-12 ||
                        (ti < delta + 1e-12 && leave_row >= 0 &&
                         std::abs(alpha[static_cast<size_t>(i)]) > std::abs(leave_alpha))) {
                        delta = std::max(ti, 0.0);
                        leave_row = i;
                        leave_at_upper = true;
                        leave_alpha = alpha[static_cast<size_t>(i)];
                    }
                }
            }
            if (!std::isfinite(delta))
                throw numeric_error("solve_projected_lp: unbounded direction (unexpected)");

            ++pivots;
            if (delta <= feas_tol) {
                if (++degen > 5 * (T + q)) bland = true;  // anti-cycling
            }

            if (leave_row < 0) {
                // bound flip, basis unchanged
                for (int i = 0; i < q; ++i)
                    xb[static_cast<size_t>(i)] -= sgn * alpha[static_cast<size_t>(i)] * delta;
                status[static_cast<size_t>(enter)] =
                    status[static_cast<size_t>(enter)] == kStatusLo ? kStatusUp : kStatusLo;
                continue;
            }

            // pivot: entering becomes basic at its new value
            for (int i = 0; i < q; ++i)
                xb[static_cast<size_t>(i)] -= sgn * alpha[static_cast<size_t>(i)] * delta;
            const double enter_val =
                status[static_cast<size_t>(enter)] == kStatusLo ? delta : 1.0 - delta;
            const long leaving = basis[static_cast<size_t>(leave_row)];
            status[static_cast<size_t>(leaving)] = leave_at_upper ? kStatusUp : kStatusLo;
            in_row[static_cast<size_t>(leaving)] = -1;
            basis[static_cast<size_t>(leave_row)] = static_cast<int>(enter);
            status[static_cast<size_t>(enter)] = kStatusBasic;
            in_row[static_cast<size_t>(enter)] = leave_row;
            xb[static_cast<size_t>(leave_row)] = enter_val;

            // binv row update
            const double piv = alpha[static_cast<size_t>(leave_row)];
            if (std::abs(piv) < 1e-11) {
                refactor();
                continue;
            }
            const double inv_piv = 1.0 / piv;
            for (int j = 0; j < q; ++j) binv(static_cast<int>(leave_row), j) *= inv_piv;
            for (int i = 0; i < q; ++i) {
                if (i == leave_row) continue;
                const double f = alpha[static_cast<size_t>(i)];
                if (f == 0.0) continue;
                for (int j = 0; j < q; ++j)
                    binv(i, j) -= f * binv(static_cast<int>(leave_row), j);
            }
            if (++basis_changes % 256 == 0) refactor();
        }
        if (pivots >= cap) throw numeric_error("solve_projected_lp: iteration cap hit");

        LpResult out;
        out.pivots = pivots;
        out.x.assign(static_cast<size_t>(T), 0.0);
        for (long t = 0; t < T; ++t) {
            const int8_t st = status[static_cast<size_t>(t)];
            double v = 0.0;
            if (st == kStatusUp)
                v = 1.0;
            else if (st == kStatusBasic)
                v = xb[static_cast<size_t>(in_row[static_cast<size_t>(t)])];
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
            out.x[static_cast<size_t>(t)] = v;
        }
        double obj = 0.0;
        for (long t = 0; t < T; ++t) obj += ps.r(t) * out.x[static_cast<size_t>(t)];
        out.value = obj;

        // defensive feasibility audit of the assembled point
        Vec used(static_cast<size_t>(q), 0.0);
        for (long t = 0; t < T; ++t) {
            const double xv = out.x[static_cast<size_t>(t)];
            if (xv == 0.0) continue;
            const Vec& aphi = ps.aphi(t);
            for (int j = 0; j < q; ++j) used[static_cast<size_t>(j)] += aphi[static_cast<size_t>(j)] * xv;
        }
        const double audit_tol = 1e-6 * (1.0 + norm_inf(u));
        for (int j = 0; j < q; ++j)
            if (used[static_cast<size_t>(j)] > u[static_cast<size_t>(j)] + audit_tol)
                throw numeric_error("solve_projected_lp: assembled point infeasible");
        return out;
    }
};

}  // namespace

LpResult solve_projected_lp(const ProjectedStream& ps) {
    if (ps.q > 64 || ps.T > 100000)
        throw config_error("solve_projected_lp: scale guard (q <= 64, T <= 1e5)");
    for (double v : ps.bphi)
        if (!(v >= 0.0)) throw config_error("solve_projected_lp: projected budget must be >= 0");
    Simplex s(ps);
    return s.run();
}

double brute_force_lp(const std::vector<Vec>& rows, const Vec& rhs, const Vec& r) {
    const int nrows = static_cast<int>(rows.size());
    const int T = static_cast<int>(r.size());
    if (T > 6) throw config_error("brute_force_lp: T <= 6");
    if (nrows > 4) throw config_error("brute_force_lp: at most 4 constraint rows");
    if (rhs.size() != rows.size()) throw dim_error("brute_force_lp: rhs/rows size mismatch");
    for (const Vec& row : rows)
        if (row.size() != static_cast<size_t>(T))
            throw dim_error("brute_force_lp: row length must equal T");

    double scale = 1.0;
    for (double v : rhs) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * scale;

    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    Vec x(static_cast<size_t>(T), 0.0);
    std::vector<int> srows, fvars, offvars;

    for (unsigned smask = 0; smask < (1u << nrows); ++smask) {
        const int s = std::popcount(smask);
        if (s > T) continue;
        srows.clear();
        for (int i = 0; i < nrows; ++i)
            if (smask & (1u << i)) srows.push_back(i);
        for (unsigned fmask = 0; fmask < (1u << T); ++fmask) {
            if (std::popcount(fmask) != s) continue;
            fvars.clear();
            offvars.clear();
            for (int t = 0; t < T; ++t)
                (fmask & (1u << t) ? fvars : offvars).push_back(t);
            const int noff = static_cast<int>(offvars.size());
            for (unsigned amask = 0; amask < (1u << noff); ++amask) {
                for (int k = 0; k < noff; ++k)
                    x[static_cast<size_t>(offvars[static_cast<size_t>(k)])] =
                        (amask & (1u << k)) ? 1.0 : 0.0;
                if (s > 0) {
                    Mat M(s, s);
                    Vec c(static_cast<size_t>(s), 0.0);
                    for (int i = 0; i < s; ++i) {
                        const Vec& row = rows[static_cast<size_t>(srows[static_cast<size_t>(i)])];
                        double ci = rhs[static_cast<size_t>(srows[static_cast<size_t>(i)])];
                        for (int k = 0; k < noff; ++k)
                            ci -= row[static_cast<size_t>(offvars[static_cast<size_t>(k)])] *
                                  x[static_cast<size_t>(offvars[static_cast<size_t>(k)])];
                        c[static_cast<size_t>(i)] = ci;
                        for (int k = 0; k < s; ++k)
                            M(i, k) = row[static_cast<size_t>(fvars[static_cast<size_t>(k)])];
                    }
                    if (!solve_inplace(M, c)) continue;  // singular: not a vertex
                    bool inbox = true;
                    for (int k = 0; k < s; ++k) {
                        const double v = c[static_cast<size_t>(k)];
                        if (!(v >= -tol && v <= 1.0 + tol)) {
                            inbox = false;
                            break;
                        }
                    }
                    if (!inbox) continue;
                    for (int k = 0; k < s; ++k)
                        x[static_cast<size_t>(fvars[static_cast<size_t>(k)])] =
                            c[static_cast<size_t>(k)];
                }
                bool feasible = true;
                for (int i = 0; i < nrows && feasible; ++i) {
                    double lhs = 0.0;
                    for (int t = 0; t < T; ++t)
                        lhs += rows[static_cast<size_t>(i)][static_cast<size_t>(t)] *
                               x[static_cast<size_t>(t)];
                    if (lhs > rhs[static_cast<size_t>(i)] + tol) feasible = false;
                }
                if (!feasible) continue;
                double obj = 0.0;
                for (int t = 0; t < T; ++t) obj += r[static_cast<size_t>(t)] * x[static_cast<size_t>(t)];
                if (!found || obj > best) best = obj;
                found = true;
            }
        }
    }
    if (!found) throw numeric_error("brute_force_lp: no feasible candidate point");
    return best;
}

Vec recover_primal_threshold(const ProjectedStream& ps, const Vec& w_star, double tie_rtol) {
    if (w_star.size() != static_cast<size_t>(ps.q))
        throw dim_error("recover_primal_threshold: dual dimension mismatch");
    for (double v : w_star)
        if (!(v >= 0.0))
            throw config_error("recover_primal_threshold: dual must be non-negative");
    Vec x(static_cast<size_t>(ps.T), 0.0);
    for (long t = 0; t < ps.T; ++t) {
        const double r = ps.r(t);
        const double s = dot(ps.aphi(t), w_star);
        const double band = tie_rtol * (1.0 + std::abs(r) + std::abs(s));
        x[static_cast<size_t>(t)] = (r > s + band) ? 1.0 : 0.0;
    }
    return x;
}

BenchmarkReport benchmark(const ProjectedStream& ps) {
    BenchmarkReport rep;
    LpResult lp = solve_projected_lp(ps);
    DualObjective obj = DualObjective::build(ps);
    MinimizeResult mr = minimize_f_T_phi(obj);
    rep.r_phi_star = lp.value;
    rep.dual_value = static_cast<double>(ps.T) * mr.value;
    rep.gap = rep.dual_value - rep.r_phi_star;
    rep.w_hat = std::move(mr.w);
    rep.x_star = std::move(lp.x);
    rep.lp_pivots = lp.pivots;
    rep.dual_iters = mr.iters;
    return rep;
}

void dump_benchmark_csv(const BenchmarkReport& rep, std::ostream& os) {
    os << "r_phi_star,dual_value,gap,lp_pivots,dual_iters\n";
    put_g17(os, rep.r_phi_star);
    os << ',';
    put_g17(os, rep.dual_value);
    os << ',';
    put_g17(os, rep.gap);
    os << ',' << rep.lp_pivots << ',' << rep.dual_iters << "\n";
}

void dump_w_csv(const Vec& w, std::ostream& os) {
    os << "j,w_j\n";
    for (size_t j = 0; j < w.size(); ++j) {
        os << (j + 1) << ',';
        put_g17(os, w[j]);
        os << "\n";
    }
}

}  // namespace osilp

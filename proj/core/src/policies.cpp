#include "osilp/policies.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "osilp/errors.hpp"
#include "osilp/textio.hpp"

namespace osilp {

namespace {

// componentwise c <= B; NaN never fits
bool fits(const Vec& B, const Vec& c) {
    for (size_t j = 0; j < B.size(); ++j)
        if (!(c[j] <= B[j])) return false;
    return true;
}

struct Bookkeeper {
    Trajectory traj;
    bool record = false;
    Vec budget_pre;

    void start(long steps, const Vec& B0, bool rec) {
        record = rec;
        traj.T = steps;
        traj.bphi0 = B0;
        traj.xv.assign(static_cast<size_t>(steps), 0.0);
        traj.xa.assign(static_cast<size_t>(steps), 0.0);
        if (record) traj.records.reserve(static_cast<size_t>(steps));
    }
    void note_w(const Vec& w) {
        const double n2 = norm2(w), ni = norm_inf(w);
        if (n2 > traj.w_l2_max) traj.w_l2_max = n2;
        if (ni > traj.w_inf_max) traj.w_inf_max = ni;
    }
    void capture(const Vec& B) {
        if (record) budget_pre = B;
    }
    void push(long idx, long t, double xv, double xa, const Vec& w, const Vec& g, double reward) {
        traj.xv[static_cast<size_t>(idx)] = xv;
        traj.xa[static_cast<size_t>(idx)] = xa;
        if (!record) return;
        StepRecord sr;
        sr.t = t;
        sr.x_virtual = xv;
        sr.x_actual = xa;
        sr.w = w;
        sr.g = g;
        sr.budget = budget_pre;
        sr.reward_collected = reward;
        traj.records.push_back(std::move(sr));
    }
    // residual is minus the remaining budget of the sequential chain, so a
    // gated run (B >= 0 throughout) reports a non-positive residual exactly
    void finish(const Vec& final_w, const Vec& B) {
        traj.final_w = final_w;
        traj.proj_residual.resize(B.size());
        for (size_t j = 0; j < B.size(); ++j) traj.proj_residual[j] = -B[j];
    }
};

}  // namespace

ProjectedStream make_projected(const ArrivalStream& stream, const Basis& basis, const Instance& inst) {
    if (stream.m != basis.m || inst.m != basis.m)
        throw dim_error("projected stream: stream/instance/basis disagree on m");
    if (stream.T != inst.T)
        throw dim_error("projected stream: stream and instance disagree on T");
    ProjectedStream ps;
    ps.stream = &stream;
    ps.basis = &basis;
    ps.inst = &inst;
    ps.q = basis.q;
    ps.T = stream.T;
    ps.dphi = project_columns(basis, inst.d);
    ps.bphi = project_columns(basis, inst.b);
    ps.atom_phi.resize(static_cast<size_t>(stream.support.K));
    for (int k = 0; k < stream.support.K; ++k) {
        const double* row = stream.support.atoms.row(k);
        Vec a(row, row + stream.m);
        ps.atom_phi[static_cast<size_t>(k)] = project_columns(basis, a);
    }
    return ps;
}

void dump_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (traj.records.empty())
        throw config_error("trajectory dump needs a run with record_state=true");
    const size_t q = traj.records.front().w.size();
    const size_t qb = traj.records.front().budget.size();
    os << "t,x_virtual,x_actual,reward";
    for (size_t j = 1; j <= q; ++j) os << ",w_" << j;
    for (size_t j = 1; j <= qb; ++j) os << ",B_" << j;
    os << "\n";
    for (const StepRecord& sr : traj.records) {
        os << sr.t << ',';
        put_g17(os, sr.x_virtual);
        os << ',';
        put_g17(os, sr.x_actual);
        os << ',';
        put_g17(os, sr.reward_collected);
        for (double v : sr.w) {
            os << ',';
            put_g17(os, v);
        }
        for (double v : sr.budget) {
            os << ',';
            put_g17(os, v);
        }
        os << "\n";
    }
}

Trajectory run_alg1(const ProjectedStream& ps, double gamma, bool record_state) {
    if (!(gamma > 0.0)) throw config_error("run_alg1: step size must be positive");
    const size_t q = static_cast<size_t>(ps.q);
    Vec w(q, 0.0);
    Vec B = ps.bphi;
    Bookkeeper bk;
    bk.start(ps.T, ps.bphi, record_state);
    bk.note_w(w);
    for (long t = 0; t < ps.T; ++t) {
        const Vec& aphi = ps.aphi(t);
        const double r = ps.r(t);
        const double score = dot(aphi, w);
        const double x = (r > score) ? 1.0 : 0.0;  // tie accepts nothing
        bk.capture(B);
        double reward = 0.0;
        if (x == 1.0) {
            reward = r;
            bk.traj.total_reward += r;
            for (size_t k = 0; k < q; ++k) B[k] -= aphi[k];
        }
        Vec g = subgrad_linear(ps.dphi, aphi, x);
        bk.push(t, t, x, x, w, g, reward);
        w = gd_step(w, g, gamma);
        bk.note_w(w);
    }
    bk.finish(w, B);
    return std::move(bk.traj);
}

Trajectory run_alg2(const ProjectedStream& ps, double gamma, const Potential& psi,
                    bool record_state) {
    if (!(gamma > 0.0)) throw config_error("run_alg2: step size must be positive");
    const size_t q = static_cast<size_t>(ps.q);
    Vec w(q, psi.strictly_positive_domain() ? Potential::kEntropyStart : 0.0);
    Vec B = ps.bphi;
    Bookkeeper bk;
    bk.start(ps.T, ps.bphi, record_state);
    bk.note_w(w);
    for (long t = 0; t < ps.T; ++t) {
        const Vec& aphi = ps.aphi(t);
        const double r = ps.r(t);
        const double score = dot(aphi, w);
        const double x = (r > score) ? 1.0 : 0.0;
        bk.capture(B);
        double reward = 0.0;
        if (x == 1.0) {
            reward = r;
            bk.traj.total_reward += r;
            for (size_t k = 0; k < q; ++k) B[k] -= aphi[k];
        }
        Vec g = subgrad_linear(ps.dphi, aphi, x);
        bk.push(t, t, x, x, w, g, reward);
        w = mirror_step(w, g, gamma, psi);
        bk.note_w(w);
    }
    bk.finish(w, B);
    return std::move(bk.traj);
}

TwoStageConfig plan_two_stage(long T, const DataBounds& bounds, double consum_bar,
                              TwoStageConfig p) {
    if (T < 3) throw config_error("two-stage schedule needs T >= 3");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw config_error("delta must lie in (0,1)");
    if (!(p.lambda > 0.0)) throw config_error("lambda must be positive");
    if (!(bounds.D_lo > 0.0))
        throw config_error("two-stage schedule needs min_j (d^T phi)_j > 0");
    if (!(bounds.r_bar > 0.0))
        throw config_error("two-stage schedule needs a positive reward ceiling");
    if (!(consum_bar >= 0.0) || !std::isfinite(consum_bar))
        throw config_error("consumption ceiling must be finite and non-negative");

    p.eps0 = bounds.r_bar / bounds.D_lo;
    const double Lraw = std::ceil(std::log(p.eps0 * static_cast<double>(T)));
    if (!(Lraw < 1e6)) throw config_error("degenerate schedule: log(eps0*T) out of range");
    p.L = (Lraw < 1.0) ? 1 : static_cast<long>(Lraw);
    p.delta_hat = p.delta / static_cast<double>(p.L);
    const double cb = consum_bar + bounds.D_hi;
    const double lam2 = p.lambda * p.lambda;
    p.J_formula =
        std::max(9.0 * cb * cb / lam2, 1152.0 * cb * cb * std::log(1.0 / p.delta_hat) / lam2);
    const long J_cap = T / (2 * p.L);
    if (p.J_override > 0) {
        p.J = p.J_override;
        p.theory_J_clipped = static_cast<double>(p.J) < std::ceil(p.J_formula);
    } else {
        if (J_cap < 1)
            throw config_error("horizon too small for the epoch schedule (T < 2L); increase T");
        const double jf = std::ceil(p.J_formula);
        p.J = (jf >= static_cast<double>(J_cap)) ? J_cap : static_cast<long>(jf);
        p.theory_J_clipped = static_cast<double>(p.J) < jf;
    }
    p.t_fast = p.L * p.J;
    if (p.t_fast > T)
        throw config_error("stage-one length L*J exceeds the horizon; lower J_override or raise T");
    p.eta1 = p.eps0 / (3.0 * bounds.r_bar * bounds.r_bar);
    p.V1 = (p.V1_override > 0.0) ? p.V1_override : p.eps0 / p.lambda;
    p.gamma_fast = 1.0 / std::log(static_cast<double>(T));
    p.gamma_refine = 1.0 / static_cast<double>(T);
    return p;
}

namespace {

void check_planned(const ProjectedStream& ps, const TwoStageConfig& cfg) {
    if (cfg.L < 1 || cfg.J < 1 || cfg.t_fast != cfg.L * cfg.J)
        throw config_error("two-stage config not planned; call plan_two_stage first");
    if (!(cfg.gamma_fast > 0.0) || !(cfg.eta1 > 0.0) || !(cfg.V1 > 0.0) ||
        !(cfg.gamma_refine > 0.0))
        throw config_error("two-stage config not planned; call plan_two_stage first");
    if (cfg.t_fast > ps.T)
        throw config_error("stage-one length exceeds the stream length");
}

}  // namespace

AccelerateResult run_accelerate(const ProjectedStream& ps, const TwoStageConfig& cfg,
                                bool record_state) {
    check_planned(ps, cfg);
    const size_t q = static_cast<size_t>(ps.q);
    Vec w(q, 0.0);       // decision dual, plain descent with a 1/ln T step
    Vec center(q, 0.0);  // previous epoch average = ball center
    Vec wt = center;     // accelerated iterate, confined to ball(center, V)
    Vec avg(q, 0.0), cand(q, 0.0);
    Vec B = ps.bphi;

    Bookkeeper bk;
    bk.start(cfg.t_fast, ps.bphi, record_state);
    bk.note_w(w);

    double eta = cfg.eta1, V = cfg.V1;
    for (long l = 0; l < cfg.L; ++l) {
        wt = center;
        std::fill(avg.begin(), avg.end(), 0.0);
        for (long j = 0; j < cfg.J; ++j) {
            const long t = l * cfg.J + j;
            const Vec& aphi = ps.aphi(t);
            const double r = ps.r(t);
            const double score = dot(aphi, w);
            const double xv = (r > score) ? 1.0 : 0.0;
            bk.capture(B);
            double xa = 0.0, reward = 0.0;
            if (xv == 1.0 && fits(B, aphi)) {
                xa = 1.0;
                reward = r;
                bk.traj.total_reward += r;
                for (size_t k = 0; k < q; ++k) B[k] -= aphi[k];
            }
            Vec g = subgrad_linear(ps.dphi, aphi, xv);
            // epoch average collects the pre-update accelerated iterate
            for (size_t k = 0; k < q; ++k) avg[k] += wt[k];
            bk.push(t, t, xv, xa, w, g, reward);
            w = gd_step(w, g, cfg.gamma_fast);  // the virtual decision drives both duals
            bk.note_w(w);
            for (size_t k = 0; k < q; ++k) cand[k] = wt[k] - eta * g[k];
            wt = project_ball_nonneg(cand, center, V);
        }
        for (size_t k = 0; k < q; ++k) avg[k] /= static_cast<double>(cfg.J);
        center = avg;
        eta *= 0.5;
        V *= 0.5;
    }
    bk.finish(w, B);
    bk.traj.t_fast = cfg.t_fast;
    bk.traj.theory_J_clipped = cfg.theory_J_clipped;

    AccelerateResult res;
    res.w_tilde = center;
    res.budget_left = B;
    res.t_fast = cfg.t_fast;
    res.prefix = std::move(bk.traj);
    return res;
}

Trajectory run_refine(const ProjectedStream& ps, long t_begin, const Vec& w_hat, double gamma,
                      Vec B_init, bool record_state) {
    const size_t q = static_cast<size_t>(ps.q);
    if (t_begin < 0 || t_begin > ps.T) throw config_error("run_refine: start index out of range");
    if (w_hat.size() != q || B_init.size() != q)
        throw dim_error("run_refine: dual/budget dimension mismatch");
    if (!(gamma > 0.0) || gamma > 1.0 / static_cast<double>(ps.T))
        throw config_error("run_refine: step size must lie in (0, 1/T]");
    for (size_t k = 0; k < q; ++k) {
        if (!(w_hat[k] >= 0.0))
            throw config_error("run_refine: warm-start dual must be non-negative");
        if (!(B_init[k] >= 0.0))
            throw config_error("run_refine: starting budget must be non-negative");
    }
    Vec w = w_hat;
    Vec B = std::move(B_init);
    Bookkeeper bk;
    bk.start(ps.T - t_begin, B, record_state);
    bk.note_w(w);
    for (long t = t_begin; t < ps.T; ++t) {
        const Vec& aphi = ps.aphi(t);
        const double r = ps.r(t);
        const double score = dot(aphi, w);
        const double xv = (r > score) ? 1.0 : 0.0;
        bk.capture(B);
        double xa = 0.0, reward = 0.0;
        if (xv == 1.0 && fits(B, aphi)) {
            xa = 1.0;
            reward = r;
            bk.traj.total_reward += r;
            for (size_t k = 0; k < q; ++k) B[k] -= aphi[k];
        }
        Vec g = subgrad_linear(ps.dphi, aphi, xv);
        bk.push(t - t_begin, t, xv, xa, w, g, reward);
        w = gd_step(w, g, gamma);
        bk.note_w(w);
    }
    bk.finish(w, B);
    return std::move(bk.traj);
}

Trajectory run_two_stage(const ProjectedStream& ps, const TwoStageConfig& cfg,
                         bool record_state) {
    AccelerateResult acc = run_accelerate(ps, cfg, record_state);
    Trajectory ref =
        run_refine(ps, acc.t_fast, acc.w_tilde, cfg.gamma_refine, acc.budget_left, record_state);

    Trajectory out;
    out.T = ps.T;
    out.total_reward = acc.prefix.total_reward + ref.total_reward;
    out.final_w = std::move(ref.final_w);
    out.w_l2_max = std::max(acc.prefix.w_l2_max, ref.w_l2_max);
    out.w_inf_max = std::max(acc.prefix.w_inf_max, ref.w_inf_max);
    out.proj_residual = std::move(ref.proj_residual);  // minus what the continuous chain left
    out.bphi0 = ps.bphi;
    out.t_fast = acc.t_fast;
    out.theory_J_clipped = cfg.theory_J_clipped;
    out.xv = std::move(acc.prefix.xv);
    out.xv.insert(out.xv.end(), ref.xv.begin(), ref.xv.end());
    out.xa = std::move(acc.prefix.xa);
    out.xa.insert(out.xa.end(), ref.xa.begin(), ref.xa.end());
    if (record_state) {
        out.records = std::move(acc.prefix.records);
        out.records.insert(out.records.end(), std::make_move_iterator(ref.records.begin()),
                           std::make_move_iterator(ref.records.end()));
    }
    return out;
}

double LinearModel::argmax(double theta_r, const Vec& aphi, const Vec& w) const {
    const double score = dot(aphi, w);
    return (theta_r > score) ? 1.0 : 0.0;
}

void LinearModel::consume_phi(const Vec& aphi, double x, Vec& out) const {
    out.resize(aphi.size());
    for (size_t k = 0; k < aphi.size(); ++k) out[k] = aphi[k] * x;
}

double LogUtilityModel::argmax(double theta_r, const Vec& aphi, const Vec& w) const {
    if (!(theta_r > 0.0)) return 0.0;  // no utility to collect, ties toward 0
    const double s = dot(aphi, w);
    if (!(s > 0.0)) return 1.0;  // price non-positive, utility increasing on [0,1]
    const double x = theta_r / s - 1.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x;
}

double LogUtilityModel::reward(double theta_r, double x) const {
    return theta_r * std::log1p(x);
}

void LogUtilityModel::consume_phi(const Vec& aphi, double x, Vec& out) const {
    out.resize(aphi.size());
    for (size_t k = 0; k < aphi.size(); ++k) out[k] = aphi[k] * x;
}

double LogUtilityModel::f_bar(const DataBounds& b) const {
    return b.r_abs * 0.69314718055994531;  // |theta| ln 2 tops |theta ln(1+x)| on [0,1]
}

Trajectory run_general_md(const ProjectedStream& ps, const GeneralModel& model, double gamma,
                          const Potential& psi, bool record_state) {
    if (!(gamma > 0.0)) throw config_error("run_general_md: step size must be positive");
    const size_t q = static_cast<size_t>(ps.q);
    Vec w(q, psi.strictly_positive_domain() ? Potential::kEntropyStart : 0.0);
    Vec B = ps.bphi;
    Vec c(q, 0.0), g(q, 0.0);
    Bookkeeper bk;
    bk.start(ps.T, ps.bphi, record_state);
    bk.note_w(w);
    for (long t = 0; t < ps.T; ++t) {
        const Vec& aphi = ps.aphi(t);
        const double r = ps.r(t);
        const double x = model.argmax(r, aphi, w);
        model.consume_phi(aphi, x, c);
        for (size_t k = 0; k < q; ++k) g[k] = ps.dphi[k] - c[k];
        const double reward = model.reward(r, x);
        bk.capture(B);
        bk.traj.total_reward += reward;
        for (size_t k = 0; k < q; ++k) B[k] -= c[k];
        bk.push(t, t, x, x, w, g, reward);
        w = mirror_step(w, g, gamma, psi);
        bk.note_w(w);
    }
    bk.finish(w, B);
    return std::move(bk.traj);
}

Trajectory run_general_two_stage(const ProjectedStream& ps, const GeneralModel& model,
                                 const TwoStageConfig& cfg, bool record_state) {
    check_planned(ps, cfg);
    if (cfg.gamma_refine > 1.0 / static_cast<double>(ps.T))
        throw config_error("run_general_two_stage: refine step exceeds 1/T");
    const size_t q = static_cast<size_t>(ps.q);
    Vec w(q, 0.0), center(q, 0.0);
    Vec wt = center;
    Vec avg(q, 0.0), cand(q, 0.0);
    Vec B = ps.bphi;
    Vec cv(q, 0.0), g(q, 0.0);

    Bookkeeper bk;
    bk.start(ps.T, ps.bphi, record_state);
    bk.note_w(w);

    // stage totals accumulate separately and add once at the end, matching
    // the composed linear runners to the last bit
    double stage1_total = 0.0, stage2_total = 0.0;

    double eta = cfg.eta1, V = cfg.V1;
    for (long l = 0; l < cfg.L; ++l) {
        wt = center;
        std::fill(avg.begin(), avg.end(), 0.0);
        for (long j = 0; j < cfg.J; ++j) {
            const long t = l * cfg.J + j;
            const Vec& aphi = ps.aphi(t);
            const double r = ps.r(t);
            const double xv = model.argmax(r, aphi, w);
            model.consume_phi(aphi, xv, cv);
            bk.capture(B);
            double xa = 0.0, reward;
            if (fits(B, cv)) {
                xa = xv;
                reward = model.reward(r, xa);
                for (size_t k = 0; k < q; ++k) B[k] -= cv[k];
            } else {
                reward = model.reward(r, 0.0);
            }
            stage1_total += reward;
            for (size_t k = 0; k < q; ++k) g[k] = ps.dphi[k] - cv[k];
            for (size_t k = 0; k < q; ++k) avg[k] += wt[k];
            bk.push(t, t, xv, xa, w, g, reward);
            w = gd_step(w, g, cfg.gamma_fast);
            bk.note_w(w);
            for (size_t k = 0; k < q; ++k) cand[k] = wt[k] - eta * g[k];
            wt = project_ball_nonneg(cand, center, V);
        }
        for (size_t k = 0; k < q; ++k) avg[k] /= static_cast<double>(cfg.J);
        center = avg;
        eta *= 0.5;
        V *= 0.5;
    }

    // refine stage: dual restarts from the last epoch average, budget continues
    w = center;
    bk.note_w(w);
    for (long t = cfg.t_fast; t < ps.T; ++t) {
        const Vec& aphi = ps.aphi(t);
        const double r = ps.r(t);
        const double xv = model.argmax(r, aphi, w);
        model.consume_phi(aphi, xv, cv);
        bk.capture(B);
        double xa = 0.0, reward;
        if (fits(B, cv)) {
            xa = xv;
            reward = model.reward(r, xa);
            for (size_t k = 0; k < q; ++k) B[k] -= cv[k];
        } else {
            reward = model.reward(r, 0.0);
        }
        stage2_total += reward;
        for (size_t k = 0; k < q; ++k) g[k] = ps.dphi[k] - cv[k];
        bk.push(t, t, xv, xa, w, g, reward);
        w = gd_step(w, g, cfg.gamma_refine);
        bk.note_w(w);
    }
    bk.traj.total_reward = stage1_total + stage2_total;
    bk.finish(w, B);
    bk.traj.t_fast = cfg.t_fast;
    bk.traj.theory_J_clipped = cfg.theory_J_clipped;
    return std::move(bk.traj);
}

Trajectory run_simple_gd_baseline(const ProjectedStream& ps, double gamma, bool record_state) {
    if (!(gamma > 0.0)) throw config_error("run_simple_gd_baseline: step size must be positive");
    const size_t m = static_cast<size_t>(ps.stream->m);
    const size_t q = static_cast<size_t>(ps.q);
    const Vec& d = ps.inst->d;
    Vec p(m, 0.0);  // full m-dimensional dual
    Vec gm(m, 0.0);
    Vec B = ps.bphi;
    Bookkeeper bk;
    bk.start(ps.T, ps.bphi, record_state);
    bk.note_w(p);
    for (long t = 0; t < ps.T; ++t) {
        const double* a = ps.stream->arrival_a(t);
        const double r = ps.r(t);
        const double score = dot(a, p.data(), static_cast<int>(m));
        const double x = (r > score) ? 1.0 : 0.0;
        bk.capture(B);
        double reward = 0.0;
        if (x == 1.0) {
            reward = r;
            bk.traj.total_reward += r;
            const Vec& aphi = ps.aphi(t);
            for (size_t k = 0; k < q; ++k) B[k] -= aphi[k];
        }
        for (size_t i = 0; i < m; ++i) gm[i] = d[i] - a[i] * x;
        bk.push(t, t, x, x, p, gm, reward);
        p = gd_step(p, gm, gamma);
        bk.note_w(p);
    }
    bk.finish(p, B);
    return std::move(bk.traj);
}

}  // namespace osilp

#pragma once
#include <iosfwd>
#include <memory>

#include "osilp/dual.hpp"
#include "osilp/instance.hpp"

// Online policies. Every runner consumes an arrival stream through its
// q-dimensional projections and produces a Trajectory.
//
// Conventions shared by all runners:
//  - Tie rule: a reward exactly equal to the threshold score yields a zero
//    virtual decision.
//  - Budget-gated runners (run_accelerate, run_refine, run_two_stage,
//    run_general_two_stage) keep the remaining projected budget
//    componentwise non-negative in exact floating point: the gate admits a
//    decision only when its consumption fits, so each subtraction stays >= 0.
//  - Dual updates in the gated runners use the *virtual* decision; budget
//    updates use the *actual* (gated) decision.
//  - proj_residual is the accumulated consumption minus the initial
//    projected budget, taken from the same sequential chain the gate reads,
//    so a gated run reports a residual that is <= 0 exactly.

namespace osilp {

// Arrival stream plus everything projected through the basis once.
struct ProjectedStream {
    const ArrivalStream* stream = nullptr;
    const Basis* basis = nullptr;
    const Instance* inst = nullptr;
    int q = 0;
    long T = 0;
    Vec dphi;                   // d^T phi
    Vec bphi;                   // b^T phi
    std::vector<Vec> atom_phi;  // per support atom, a_k^T phi

    const Vec& aphi(long t) const { return atom_phi[static_cast<size_t>(stream->atom[static_cast<size_t>(t)])]; }
    double r(long t) const { return stream->r[static_cast<size_t>(t)]; }
};

ProjectedStream make_projected(const ArrivalStream& stream, const Basis& basis, const Instance& inst);

struct StepRecord {
    long t = 0;
    double x_virtual = 0, x_actual = 0;
    Vec w;       // dual iterate used for the decision at t
    Vec g;       // update direction at t
    Vec budget;  // remaining budget before consumption at t
    double reward_collected = 0;
};

struct Trajectory {
    long T = 0;  // arrivals consumed (a prefix run consumes fewer than the stream)
    double total_reward = 0.0;
    Vec final_w;
    double w_l2_max = 0.0, w_inf_max = 0.0;  // over every dual iterate incl. the start
    Vec proj_residual;                       // consumption minus initial budget, chained
    Vec bphi0;                               // initial projected budget of the run
    long t_fast = -1;                        // stage switch step; -1 when single-stage
    bool theory_J_clipped = false;           // epoch length fell below the schedule formula
    Vec xv, xa;                              // virtual / actual decisions per step
    std::vector<StepRecord> records;         // filled only when record_state
};

// CSV dump `t,x_virtual,x_actual,reward,w_1..w_q,B_1..B_q`; needs records.
void dump_trajectory_csv(const Trajectory& traj, std::ostream& os);

// Plain projected subgradient descent, w_1 = 0, no budget gate.
Trajectory run_alg1(const ProjectedStream& ps, double gamma, bool record_state = false);

// Mirror-descent variant; quadratic potential reproduces run_alg1 exactly.
// Entropy starts from the all-(1e-6) vector and stays strictly positive.
Trajectory run_alg2(const ProjectedStream& ps, double gamma, const Potential& psi,
                    bool record_state = false);

// Epoch-restarted stage schedule. Derived once per run from the realized
// data bounds; J defaults to min(schedule formula, T/(2L)) and sets
// theory_J_clipped when the cap bites.
struct TwoStageConfig {
    // inputs
    double delta = 0.1;    // failure probability, in (0,1)
    double lambda = 1.0;   // error-bound modulus
    double theta = 1.0;    // error-bound exponent (recorded; not in the printed schedule)
    long J_override = 0;   // > 0 forces the inner epoch length
    double V1_override = 0.0;

    // derived
    double eps0 = 0, eta1 = 0, V1 = 0, gamma_fast = 0, gamma_refine = 0, delta_hat = 0;
    double J_formula = 0;  // value of the schedule formula (can be astronomically large)
    long L = 0, J = 0, t_fast = 0;
    bool theory_J_clipped = false;
};

// consum_bar is the consumption ceiling entering the schedule: the linear
// runners pass bounds.C_bar, general runners pass model.g_bar(bounds).
TwoStageConfig plan_two_stage(long T, const DataBounds& bounds, double consum_bar,
                              TwoStageConfig params);

struct AccelerateResult {
    Trajectory prefix;  // decisions for the first t_fast arrivals
    Vec w_tilde;        // final epoch average
    Vec budget_left;    // remaining projected budget after the prefix
    long t_fast = 0;
};

// Two dual sequences: the decision dual (step 1/ln T, orthant projection,
// updated with the virtual decision) and the accelerated iterate (step
// eta_l, projected onto orthant I ball(prev epoch average, V_l)); both read
// the same virtual decision. Epoch average is over the J pre-update
// iterates; eta and V halve per epoch.
AccelerateResult run_accelerate(const ProjectedStream& ps, const TwoStageConfig& cfg,
                                bool record_state = false);

// Small-step refinement from a near-optimal start. Requires gamma <= 1/T.
// Runs on arrivals [t_begin, T); B_init must be componentwise >= 0.
Trajectory run_refine(const ProjectedStream& ps, long t_begin, const Vec& w_hat, double gamma,
                      Vec B_init, bool record_state = false);

// Accelerate then refine with one continuous budget threaded through both
// stages (the refine stage starts from what the first stage left over).
Trajectory run_two_stage(const ProjectedStream& ps, const TwoStageConfig& cfg,
                         bool record_state = false);

// Reward f(x; theta) and consumption g(x; theta) with an argmax oracle over
// the decision set; everything the policies need is expressed through the
// basis projections. g(0; theta) = 0 is assumed throughout.
struct GeneralModel {
    virtual ~GeneralModel() = default;
    // argmax_{x in X} f(x; theta) - <w, gphi(x; theta)>, ties toward 0
    virtual double argmax(double theta_r, const Vec& aphi, const Vec& w) const = 0;
    virtual double reward(double theta_r, double x) const = 0;
    virtual void consume_phi(const Vec& aphi, double x, Vec& out) const = 0;  // g(x)^T phi
    virtual double f_bar(const DataBounds& b) const = 0;  // ceiling on |f|
    virtual double g_bar(const DataBounds& b) const = 0;  // ceiling on ||g(x)^T phi||_inf
    virtual const char* name() const = 0;
};

// f = theta*x, g = a*x, X = {0,1}: reduces the general runners to the
// linear ones decision-for-decision.
struct LinearModel final : GeneralModel {
    double argmax(double theta_r, const Vec& aphi, const Vec& w) const override;
    double reward(double theta_r, double x) const override { return theta_r * x; }
    void consume_phi(const Vec& aphi, double x, Vec& out) const override;
    double f_bar(const DataBounds& b) const override { return b.r_abs; }
    double g_bar(const DataBounds& b) const override { return b.C_bar; }
    const char* name() const override { return "linear"; }
};

// f = theta*ln(1+x), g = a*x, X = [0,1]; argmax has the closed form
// clamp(theta/s - 1, 0, 1) against the price s = <w, aphi> (x = 1 when the
// price is non-positive, x = 0 when theta <= 0).
struct LogUtilityModel final : GeneralModel {
    double argmax(double theta_r, const Vec& aphi, const Vec& w) const override;
    double reward(double theta_r, double x) const override;
    void consume_phi(const Vec& aphi, double x, Vec& out) const override;
    double f_bar(const DataBounds& b) const override;
    double g_bar(const DataBounds& b) const override { return b.C_bar; }
    const char* name() const override { return "log_utility"; }
};

// Mirror descent with the argmax oracle; no budget gate.
Trajectory run_general_md(const ProjectedStream& ps, const GeneralModel& model, double gamma,
                          const Potential& psi, bool record_state = false);

// Two-stage schedule with the argmax oracle; gate tests the virtual
// decision's consumption, budget subtracts the actual decision's.
Trajectory run_general_two_stage(const ProjectedStream& ps, const GeneralModel& model,
                                 const TwoStageConfig& cfg, bool record_state = false);

// Full m-dimensional dual descent baseline (no basis): decision thresholds
// on a_t^T p_t, update p <- max(p + gamma*(a_t x_t - d), 0). The projected
// budget chain is still tracked so its violation is measured in the same
// space as the other policies.
Trajectory run_simple_gd_baseline(const ProjectedStream& ps, double gamma,
                                  bool record_state = false);

}  // namespace osilp

#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "osilp/basis.hpp"
#include "osilp/la.hpp"
#include "osilp/rng.hpp"

// Problem instances and arrival streams. Two input models: i.i.d. draws
// from a (finite or continuous) source distribution, and a uniformly random
// permutation of a fixed multiset. All generators are pure functions of
// (config, seed).

namespace osilp {

struct Dist1D {
    enum class Family { uniform, normal, cauchy, categorical };
    Family family = Family::uniform;
    double p1 = 0.0, p2 = 1.0;  // (lo,hi) | (mean,sd) | (loc,scale)
    Vec values;                 // categorical support, uniform over entries

    double sample(Rng& rng) const;
    bool heavy_tailed() const { return family == Family::cauchy; }
};

// Joint description of one arrival's reward and column entries.
// When perm_mix is set, column entries cycle through five per-row
// categories (U[0,3], N(2,1), N(1,1), N(0,1), uniform over {-1,0,1})
// assigned round-robin by row index, and `entry` is ignored.
struct DistConfig {
    Dist1D reward;
    Dist1D entry;
    bool perm_mix = false;
    int support_K = 0;  // 0 = continuous (fresh draw each arrival)

    bool heavy_tailed() const { return reward.heavy_tailed() || (!perm_mix && entry.heavy_tailed()); }
};

// Named presets for the benchmark experiments.
DistConfig preset_uniform();   // r ~ U[0,1], a ~ U[0,4]
DistConfig preset_normal();    // r ~ N(1,1), a ~ N(4,1)
DistConfig preset_cauchy();    // r ~ Cauchy(0,1), a ~ Cauchy(2,1)
DistConfig preset_perm_mix();  // r ~ U[0,1], five-category columns

struct Support {
    int K = 0, m = 0;
    Vec r;      // K rewards
    Mat atoms;  // K x m columns
};

struct Instance {
    long T = 0;
    int m = 0;
    Vec d;  // per-period budget, > 0
    Vec b;  // total budget, b = T * d exactly
};

enum class InputModel { stochastic, permutation };

struct ArrivalStream {
    long T = 0;
    int m = 0;
    Vec r;                  // per-arrival reward (perturbable)
    std::vector<int> atom;  // per-arrival index into support.atoms
    Support support;
    InputModel model = InputModel::stochastic;
    uint64_t seed = 0;

    const double* arrival_a(long t) const { return support.atoms.row(atom[static_cast<size_t>(t)]); }
};

// Realized data bounds, computed from the stream, rhs and basis. These feed
// the step-size schedules and the iterate-norm invariants.
struct DataBounds {
    double r_bar = 0;   // max_t r_t
    double r_abs = 0;   // max_t |r_t|
    double a_bar = 0;   // max_t ||a_t||_inf
    double d_lo = 0;    // min_j d_j
    double d_hi = 0;    // max_j d_j
    double C_bar = 0;   // max_t ||a_t^T phi||_inf
    double D_lo = 0;    // min_j (d^T phi)_j
    double D_hi = 0;    // max_j (d^T phi)_j
    bool bounded = true;  // false for heavy-tailed sources; bound checks are advisory then
};

Support gen_support(const DistConfig& dist, int K, int m, uint64_t seed);

// i.i.d. arrivals: uniform over the finite support.
ArrivalStream stream_stochastic(const Support& support, long T, uint64_t seed);
// i.i.d. arrivals from a continuous source; builds a T-atom support.
ArrivalStream stream_stochastic(const DistConfig& dist, long T, int m, uint64_t seed);
// Uniformly random permutation (Fisher-Yates) of the base stream's multiset.
ArrivalStream stream_permutation(const ArrivalStream& base, uint64_t seed);

Vec sample_rhs(int m, double lo, double hi, uint64_t seed);
Instance make_instance(long T, Vec d);

// r_t <- r_t + eps_t with eps_t ~ U[0,beta]; columns unchanged. Breaks
// reward ties so that threshold recovery is in general position.
ArrivalStream perturb_rewards(const ArrivalStream& stream, double beta, uint64_t seed);

DataBounds compute_bounds(const ArrivalStream& stream, const Instance& inst, const Basis& basis,
                          bool heavy_tailed = false);

// CSV round-trip, lossless for binary64 (17 significant digits).
// Arrivals: header `t,r,a_1,...,a_m`; rhs: header `j,d_j`.
void dump_stream_csv(const ArrivalStream& stream, std::ostream& os);
ArrivalStream load_stream_csv(std::istream& is);
void dump_rhs_csv(const Vec& d, std::ostream& os);
Vec load_rhs_csv(std::istream& is);

}  // namespace osilp

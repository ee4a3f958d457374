#pragma once
#include <cmath>
#include <cstdint>
#include <random>

// Deterministic random source. The mt19937_64 engine's raw output is pinned
// by the C++ standard, but the standard's *distributions* are not, so every
// transform (uniform, normal, cauchy, bounded int) is written out here by
// hand. Streams are therefore bit-identical across compilers and platforms.

namespace osilp {

// splitmix64 finalizer; decorrelates sequential seeds.
inline uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Child seed derivation: pure function of (master, index). Used for
// replication isolation -- removing child i never changes child j.
inline uint64_t child_seed(uint64_t master, uint64_t index) {
    return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, cosine branch only; two fresh uniforms per call, no cache.
    double normal(double mean, double sd) {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * (r * std::cos(6.283185307179586476925286766559 * u2));
    }

    double cauchy(double loc, double scale) {
        const double u = uniform01();
        return loc + scale * std::tan(3.1415926535897932384626433832795 * (u - 0.5));
    }

    // Unbiased integer in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        const uint64_t q = UINT64_MAX / n;
        const uint64_t lim = q * n;
        uint64_t x = eng_();
        while (x >= lim) x = eng_();
        return x % n;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace osilp

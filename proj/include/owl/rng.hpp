#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "owl/types.hpp"

namespace owl {

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
/// the standard); the distributions are hand-rolled so that sequences are
/// identical across standard library implementations.
class RandomEngine {
 public:
  explicit RandomEngine(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    // Rejection-free modulo bias is negligible for simulation-sized n, but
    // keep it exact anyway.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(uniform_int(
                    static_cast<uint64_t>(hi_inclusive - lo + 1)));
  }

  /// Standard normal via Box-Muller (portable, unlike std::normal_distribution).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  Vec3 uniform_in_box(const Vec3& lo, const Vec3& hi) {
    return Vec3(uniform(lo.x(), hi.x()), uniform(lo.y(), hi.y()),
                uniform(lo.z(), hi.z()));
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

/// splitmix64; used to derive independent per-subsystem seeds from the
/// master seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace owl

#pragma once

#include <cstdint>

namespace kpvote {

/// Deterministic splitmix64-based generator. Used instead of <random> so that
/// audit trials and test fixtures reproduce bit-identically across standard
/// library implementations. Per-trial streams derive from (seed, trial).
class rng {
 public:
  explicit rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) { next(); }

  static rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    rng r(seed);
    r.state_ ^= mix(trial + 0x2545f4914f6cdd1dull);
    r.next();
    return r;
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  bool coin() { return (next() & 1u) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace kpvote

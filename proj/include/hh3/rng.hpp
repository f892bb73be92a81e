#pragma once

#include <cstdint>

namespace hh3 {

/// Deterministic, platform-independent RNG (splitmix64). Streams can be
/// forked per sample/slot so parallel evaluation stays reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Uniform integer in [0, bound).
  uint64_t below(uint64_t bound) { return next() % bound; }

  /// Forks an independent stream for (this seed, tag) deterministically.
  static uint64_t mix(uint64_t seed, uint64_t tag) {
    SplitMix64 s(seed ^ (0x632be59bd9b4e019ULL + tag * 0x9e3779b97f4a7c15ULL));
    return s.next();
  }

 private:
  uint64_t state_;
};

}  // namespace hh3

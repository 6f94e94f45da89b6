#pragma once

#include <cstdint>
#include <random>

namespace logdepth {

/// Deterministic generator. mt19937_64's output sequence is fixed by the
/// standard; the bounded draws below are our own so results do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Number of failures before the first success, success probability 1/2.
  std::uint64_t geometric_half() {
    std::uint64_t n = 0;
    while (coin()) ++n;
    return n;
  }

  /// Seed derivation for the i-th independent stream of a run.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) { return seed + index; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace logdepth

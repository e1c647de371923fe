#pragma once

#include <cstdint>
#include <random>

#include "obf/bytes.hpp"

namespace obf {

// Deterministic randomness source. Same seed, same draw sequence, on every
// platform: the engine is mt19937_64 and all distributions are derived here
// by hand (the std:: distribution templates are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). bound = 0 is treated as the full 64-bit range.
  std::uint64_t uniform_u64(std::uint64_t bound) {
    if (bound == 0) return next_u64();
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

  // Uniform in [lo, hi] inclusive.
  std::uint64_t uniform_range(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_u64(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform_real_range(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  std::uint8_t byte() { return static_cast<std::uint8_t>(uniform_u64(256)); }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = byte();
    return out;
  }

  bool coin(double p_true) { return uniform_real() < p_true; }

  // Derived deterministic sub-stream; does not disturb this generator.
  Rng fork(std::uint64_t stream) const { return Rng(mix(seed_, stream)); }

  // splitmix64-style finalizer; used for seed derivation everywhere.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace obf

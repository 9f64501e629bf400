#pragma once

// Counter-based pseudo-random substreams.
//
// Every stream is identified by a 64-bit key derived from (seed, path...),
// and the i-th draw of a stream is a pure function of (key, i). This makes
// simulation trials reproducible bit-for-bit from (seed, trial index) alone,
// independent of thread count or evaluation order.
//
// Constants are fixed and documented so results can be reproduced outside
// this codebase: the mixer is the SplitMix64 finalizer, keys fold path
// elements with the 64-bit golden ratio, and normal deviates use the
// Box-Muller transform on 53-bit uniforms.

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace electlab {

class SubstreamRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kPathSalt = 0xD1B54A32D192ED03ull;

  // SplitMix64 finalizer (Steele, Lea & Flood constants).
  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  SubstreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = mix64(seed + kGolden);
    for (std::uint64_t part : path) k = mix64(k ^ (part + kPathSalt));
    key_ = k;
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal deviate; Box-Muller, second value cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, bound) via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t limit = ~0ull - ~0ull % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace electlab

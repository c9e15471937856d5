// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_RNG_HPP
#define XLMIMO_RNG_HPP

#include <cstdint>

#include "xlmimo/errors.hpp"

namespace xlmimo {

// Counter-based generator built on the SplitMix64 output function.  The i-th
// output of a stream is a pure function of (seed, stream, i), so experiments
// replay bit-identically from the run config and any language can reproduce
// the draws (see README for the exact mapping).
//
//   out(s, i)          = mix64(s + (i + 1) * 0x9E3779B97F4A7C15)
//   stream_key(seed,t) = out(seed, t)
//   draw(seed, t, i)   = out(stream_key(seed, t), i)
namespace rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t out(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

// Documented stream ids.  Per-user streams keep a user's channel independent
// of the total user count; scheduler streams are disjoint from all user ids.
constexpr std::uint64_t kStreamsPerUser = 4;
constexpr std::uint64_t kUserPositionStream = 0;    // + 4*k
constexpr std::uint64_t kScattererLocStream = 1;    // + 4*k
constexpr std::uint64_t kScattererPhaseStream = 2;  // + 4*k
constexpr std::uint64_t kScattererRcsStream = 3;    // + 4*k
constexpr std::uint64_t kGreedyOrderStream = 1ULL << 32;
constexpr std::uint64_t kRandomGroupingStream = (1ULL << 32) + 1;

/// One named stream of a seeded counter generator.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(out(seed, stream_id)) {}

  std::uint64_t next_u64() { return out(key_, counter_++); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

  /// Unbiased uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    check(bound > 0, "rng: bound must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t u;
    do {
      u = next_u64();
    } while (u >= limit);
    return u % bound;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace xlmimo

#endif  // XLMIMO_RNG_HPP

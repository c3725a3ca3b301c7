#pragma once

#include <random>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr {

/// Seeded draws for sweeps. The engine is std::mt19937_64 and each 64-bit
/// output x is mapped to [0, bound) as floor(x * bound / 2^64), so a seed
/// replays the same values on every conforming standard library.
class SeededSampler {
 public:
  explicit SeededSampler(u64 seed) : engine_(seed) {}

  u64 below(u64 bound) {
    return static_cast<u64>((static_cast<u128>(engine_()) * bound) >> 64);
  }

  u64 in_range(u64 lo, u64 hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

/// `count` values drawn uniformly from [0, max].
std::vector<u64> sample_u_values(u64 seed, std::size_t count, u64 max);

/// `count` odd non-square moduli drawn from [lo, hi] (rejection on the rest).
std::vector<u64> sample_odd_nonsquares(u64 seed, std::size_t count, u64 lo, u64 hi);

}  // namespace qnr

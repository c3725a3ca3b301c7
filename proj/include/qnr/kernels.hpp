#pragma once

// Per-prime batch kernels. Every kernel exists twice: a plain loop in
// kernels::serial that the tests treat as the reference, and an OpenMP
// version in kernels::omp. Both return bit-identical results for any
// worker count.

#include <cstddef>
#include <span>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr::kernels {

inline constexpr std::size_t kBlockSize = 4096;
inline constexpr std::size_t kWitnessCap = 1000;

struct ExceptionalTally {
  u64 exceptional = 0;
  u64 total = 0;
  std::vector<u64> witnesses;  // ascending, at most the cap

  // Appends `later`, which must cover primes after this tally's.
  void merge(const ExceptionalTally& later, std::size_t cap = kWitnessCap);
};

struct GapTailRow {
  u64 p = 0;
  u64 h = 0;
  u64 count = 0;  // N(h, p)
  u64 sum = 0;    // S(h, p)
  double c1 = 0.0;  // N h^2 / sqrt(p)
  double c2 = 0.0;  // S h / sqrt(p)
};

namespace serial {

/// n(p) for every prime in the list.
std::vector<u64> least_nonresidues(std::span<const u64> primes);

/// Primes whose window [u+1, u+h] contains no quadratic non-residue.
ExceptionalTally count_exceptional(std::span<const u64> primes, u64 u, u64 h,
                                   bool zero_as_residue = true,
                                   std::size_t cap = kWitnessCap);

/// Gap tail of primes[i] at threshold hs[i].
std::vector<GapTailRow> gap_tails(std::span<const u64> primes, std::span<const u64> hs);

/// Sum over odd moduli m of (sum over n of (n/m))^2.
u64 squared_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns);

/// Sum over pairs (n1, n2) and moduli m of (m / n1 n2).
i64 swapped_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns);

}  // namespace serial

namespace omp {

std::vector<u64> least_nonresidues(std::span<const u64> primes, int workers);
ExceptionalTally count_exceptional(std::span<const u64> primes, u64 u, u64 h, int workers,
                                   bool zero_as_residue = true,
                                   std::size_t cap = kWitnessCap);
std::vector<GapTailRow> gap_tails(std::span<const u64> primes, std::span<const u64> hs,
                                  int workers);
u64 squared_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns, int workers);
i64 swapped_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns, int workers);

}  // namespace omp

GapTailRow gap_tail_row(u64 p, u64 h);

}  // namespace qnr::kernels

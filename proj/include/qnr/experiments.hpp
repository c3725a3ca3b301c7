#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnr/arith.hpp"
#include "qnr/kernels.hpp"

namespace qnr {

inline constexpr u64 kMaxErdosX = 100'000'000;
inline constexpr u64 kMaxScanQ = 500'000'000'000ULL;  // 2Q within the segmented sieve

// ---- Erdős mean ----------------------------------------------------------

struct ErdosConstant {
  double value = 0.0;
  u64 terms = 0;
};

/// Partial sum of p_k / 2^k over the first `terms` primes.
ErdosConstant erdos_constant_partial(u64 terms);

/// The same sum, truncated once p_K / 2^(K-1) < 10^-12.
ErdosConstant erdos_constant();

struct ErdosMean {
  u64 x = 0;
  u64 primes = 0;     // odd primes scanned; 2 is excluded
  u64 nres_sum = 0;   // sum of n(p)
  double mean = 0.0;
  double constant_partial = 0.0;
};

ErdosMean erdos_mean(u64 x, int workers = 1);

// ---- exceptional set -----------------------------------------------------

struct ScanOptions {
  int workers = 1;
  bool zero_as_residue = true;
  // Resumable progress file, refreshed after every `checkpoint_every` blocks.
  std::optional<std::filesystem::path> checkpoint;
  u64 checkpoint_every = 0;
  // Stop after this many blocks in total (leaves a partial checkpoint).
  std::optional<u64> stop_after_blocks;
};

struct ExceptionalDensity {
  u64 Q = 0;
  u64 u = 0;
  u64 h = 0;
  u64 exceptional = 0;
  u64 total = 0;
  double density = 0.0;
  std::vector<u64> witnesses;  // ascending, capped at 1000
  bool u_beyond_2Q = false;
  bool h_beyond_logQ = false;
  bool complete = true;  // false when stopped early
};

/// Primes p in [Q, 2Q] with d_u(p) > h.
ExceptionalDensity exceptional_density(u64 Q, u64 u, u64 h, const ScanOptions& options = {});

/// Same, over an already sieved list of the primes in [Q, 2Q].
ExceptionalDensity exceptional_density(std::span<const u64> primes, u64 Q, u64 u, u64 h,
                                       const ScanOptions& options = {});

/// Window lengths k * ceil(log Q) for k = 1..steps.
std::vector<u64> log_h_sweep(u64 Q, u64 steps);

// ---- gap tails -----------------------------------------------------------

struct GapTailScan {
  std::vector<kernels::GapTailRow> rows;
  double max_c1 = 0.0;
  double max_c2 = 0.0;
};

GapTailScan gap_tail_scan(std::span<const u64> primes, u64 h, int workers = 1);

/// Per-prime threshold h = ceil(p^(1/4)).
GapTailScan gap_tail_scan_quartic(std::span<const u64> primes, int workers = 1);

/// Least h with h^4 >= p.
u64 ceil_fourth_root(u64 p);

// ---- square-free pairs ---------------------------------------------------

inline constexpr u64 kFellerTornierCutoff = 1'000'000;

struct SquarefreePairDensity {
  u64 u = 0;
  u64 h = 0;
  u64 count = 0;
  u64 pair_count = 0;
  double expected = 0.0;  // A_partial * h
  double ratio = 0.0;
};

SquarefreePairDensity squarefree_pair_density(u64 u, u64 h);

// ---- proof trace ---------------------------------------------------------

enum class Regime { large_h, small_h };

std::string_view to_string(Regime regime);

struct BoundTerms {
  // The three terms of the final bound with every unknown constant set to 1.
  double sieve = 0.0;     // Q T / (eta (#N-1)^2 log Q)
  double charsum = 0.0;   // h^2/(#N-1)^2 * eta^(eta^(-1/2)/4-1) Q / log 2Q
  double tail = 0.0;      // h^2/(#N-1)^2 * Q^(1-eta)
  // T * #P(eta, 2Q) / (#N-1)^2, the diagonal before the size bound on P.
  double diagonal_exact = 0.0;
};

struct TraceReport {
  u64 Q = 0;
  u64 u = 0;
  u64 h = 0;
  double eta = 0.0;
  u64 M = 0;  // rough-set height, fixed at 2Q
  Regime regime = Regime::large_h;
  bool regime_forced = false;  // u < 3
  std::vector<u64> N;
  u64 N1_size = 0;  // large-h regime only
  u64 N3_size = 0;
  u64 N_size = 0;
  u64 T = 0;
  u64 rough_size = 0;
  u64 rough_prime_cutoff = 0;
  u64 primes_in_range = 0;
  u64 S_direct = 0;
  u64 S_rough = 0;
  i64 S_rough_swapped = 0;  // same sum after quadratic reciprocity
  i64 off_diagonal = 0;     // S_rough - T * #P
  BoundTerms rhs_terms;
  double exceptional_bound = 0.0;  // S_direct / (#N-1)^2
  u64 exceptional_count = 0;       // #{p in [Q, 2Q] : d_u(p) > h}
  bool h_beyond_logQ = false;
};

TraceReport proof_trace(u64 Q, u64 u, u64 h, double eta, int workers = 1);

/// Ordered pairs (n1, n2) with n1 n2 a perfect square, found by writing
/// n_i = d k_i with d = gcd(n1, n2) and testing k1, k2 for squares.
u64 count_square_products(std::span<const u64> ns);

}  // namespace qnr

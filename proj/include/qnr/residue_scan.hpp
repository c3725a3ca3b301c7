#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr {

inline constexpr u64 kMaxMapPrime = u64{1} << 31;

/// Bit table of quadratic residues modulo an odd prime p.
class ResidueMap {
 public:
  ResidueMap(u64 p, bool zero_as_residue = true);

  u64 prime() const { return p_; }
  bool zero_as_residue() const { return zero_as_residue_; }

  /// Classification of n mod p under this map's zero convention.
  bool is_residue(u64 n) const {
    const u64 r = n % p_;
    return (words_[r >> 6] >> (r & 63)) & 1;
  }

  /// Number of residues among 1..p-1; always (p-1)/2.
  u64 residue_count() const;

 private:
  u64 p_;
  bool zero_as_residue_;
  std::vector<u64> words_;
};

ResidueMap residue_map(u64 p, bool zero_as_residue = true);

/// n(p): the least quadratic non-residue modulo p.
u64 least_nonresidue(u64 p);

struct GapStats {
  u64 p = 0;
  std::vector<u64> n_seq;   // the (p-1)/2 non-residues in [1, p-1]
  std::vector<u64> deltas;  // n_{k+1} - n_k
};

GapStats gap_stats(u64 p);

struct GapTail {
  u64 count = 0;  // #{k : delta_k >= h}
  u64 sum = 0;    // sum of those delta_k
};

GapTail gap_tail(const GapStats& stats, u64 h);

/// d_u(p): the least h >= 1 such that [u+1, u+h] holds a non-residue mod p.
/// With zero_as_residue = false a multiple of p also ends the window.
u64 first_nonresidue_after(u64 p, u64 u, bool zero_as_residue = true);

/// Longest run of consecutive integers classified residue, taken cyclically
/// over a full period. Under zero_as_residue = false the multiple of p breaks
/// every run, so this is the longest run inside 1..p-1.
u64 longest_qr_run(u64 p, bool zero_as_residue = true);

struct Congruence {
  u64 modulus = 0;  // an odd prime
  u64 residue = 0;
};

/// Least u >= 0 with u = residue_i mod modulus_i for all i.
u128 crt_adversarial_u(std::span<const Congruence> congruences);

std::string to_string(u128 value);

namespace detail {
// Unvalidated scans for hot loops; p must already be an odd prime.
u64 least_nonresidue_unchecked(u64 p);
u64 first_nonresidue_after_unchecked(u64 p, u64 u, bool zero_as_residue);
// True iff d_u(p) > h under the given zero convention.
bool window_all_residues(u64 p, u64 u, u64 h, bool zero_as_residue = true);
}  // namespace detail

}  // namespace qnr

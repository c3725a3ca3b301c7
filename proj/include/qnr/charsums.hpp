#pragma once

#include "qnr/arith.hpp"
#include "qnr/sieve.hpp"

namespace qnr {

/// Sum of (m/q) over 1 <= m <= M.
i64 incomplete_char_sum(u64 M, u64 q);

/// ceil(q^(2/3)) in exact integer arithmetic: least M with M^3 >= q^2.
u64 ceil_two_thirds_power(u64 q);

/// Exponent (nu+1)/(4 nu^2) of the modulus in the Burgess bound.
double burgess_q_exponent(int nu);

struct CharSumReport {
  u64 M = 0;
  u64 q = 0;
  int nu = 2;
  i64 sum = 0;
  double q_exponent = 0.0;
  double burgess_main = 0.0;  // M^(1-1/nu) q^((nu+1)/(4 nu^2))
  double ratio = 0.0;         // |sum| / burgess_main
  bool nu_beyond_three = false;
};

/// Exact incomplete sum set against the Burgess main term (no o(1) factor).
/// q must be odd, at least 3 and not a perfect square; nu >= 1.
CharSumReport burgess_report(u64 M, u64 q, int nu);

struct RoughPartition {
  double eta = 0.0;
  u64 M = 0;
  u64 q = 0;
  u64 count_plus = 0;
  u64 count_minus = 0;
  u64 count_zero = 0;
  double main_term = 0.0;  // M/2 * prod_{p <= M^eta} (1 - 1/p)
  double deviation_plus = 0.0;
  double deviation_minus = 0.0;
  double error_scale = 0.0;  // eta^(eta^(-1/2)/4 - 1) M / log M

  u64 total() const { return count_plus + count_minus + count_zero; }
};

RoughPartition rough_partition(const RoughSet& set, u64 q);
RoughPartition rough_partition(double eta, u64 M, u64 q);

/// Sum of (m/q) over the rough set P(eta, M); q odd and not a square.
i64 rough_char_sum(double eta, u64 M, u64 q);

}  // namespace qnr

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Closed interval [lo, hi] of candidate primes.
struct PrimeRange {
  u64 lo = 2;
  u64 hi = 2;
};

inline constexpr u64 kSieveSegment = u64{1} << 20;
inline constexpr u64 kMaxRangeWidth = 1'000'000'000;
inline constexpr u64 kMaxSpfTable = 100'000'000;

/// Primes p with lo <= p <= hi in increasing order (segmented sieve).
std::vector<u64> primes_in(PrimeRange range);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

/// Smallest-prime-factor table for 2..M.
class SpfTable {
 public:
  explicit SpfTable(u64 max_value);

  u64 max_value() const { return spf_.empty() ? 0 : spf_.size() - 1; }
  u64 operator[](u64 m) const { return spf_[m]; }

  /// Distinct prime divisors of m in increasing order, m <= max_value().
  std::vector<u64> distinct_prime_factors(u64 m) const;

 private:
  std::vector<std::uint32_t> spf_;
};

SpfTable spf_table(u64 max_value);

/// The set of m <= M without prime divisors p <= M^eta.
struct RoughSet {
  double eta = 0.0;
  u64 M = 0;
  double threshold = 0.0;  // M^eta
  u64 prime_cutoff = 0;    // largest integer t with t <= M^eta
  std::vector<u64> members;
  double ratio_c0 = 0.0;   // |P| * eta * log M / M

  std::size_t size() const { return members.size(); }
};

/// Largest integer t with t <= M^eta, with exact resolution of ties.
u64 rough_prime_cutoff(double eta, u64 M);

RoughSet rough_set(double eta, u64 M);

struct EulerProduct {
  double value = 1.0;
  double normalized = 0.0;  // value * e^gamma * log y
};

/// Product over primes p <= y of (1 - 1/p).
EulerProduct mertens_product(double y);

/// Product over primes p <= p_max of (1 - 2/p^2).
double feller_tornier_A(u64 p_max);

/// Square-free integers of the window [u+1, u+h].
struct SquarefreeWindow {
  u64 u = 0;
  u64 h = 0;
  std::vector<u64> members;
  u64 pair_count = 0;  // n in the window with n and n+1 square-free

  u64 count() const { return members.size(); }
  std::vector<u64> odd_members() const;
  std::vector<u64> members_in_class(u64 residue, u64 modulus = 4) const;
};

SquarefreeWindow squarefree_in_interval(u64 u, u64 h);

/// Distinct prime factors of q by trial division up to 10^6; the cofactor
/// left over must be 1, a prime, or the square of a prime.
std::vector<u64> distinct_prime_factors(u64 q);

struct CoprimeCount {
  u64 count = 0;
  double main_term = 0.0;  // phi(q) M / q
  double residual = 0.0;   // count - main_term
  std::vector<u64> prime_factors;
};

/// #{1 <= m <= M : gcd(m, q) = 1} by inclusion-exclusion.
CoprimeCount coprime_count(u64 M, u64 q);

namespace detail {
// Compensated (Neumaier) summation of log terms.
class LogAccumulator {
 public:
  void add(double x);
  double sum() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};
}  // namespace detail

}  // namespace qnr

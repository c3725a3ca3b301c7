#include "qnr/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <iterator>
#include <numeric>
#include <optional>
#include <string>

#include "qnr/error.hpp"

namespace qnr {

namespace {

// Primes up to n by a plain sieve; n stays small (square roots, factor bases).
std::vector<u64> small_primes(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

const std::vector<u64>& trial_division_primes() {
  static const std::vector<u64> primes = small_primes(1'000'000);
  return primes;
}

}  // namespace

std::vector<u64> primes_in(PrimeRange range) {
  if (range.lo > range.hi) {
    fail(ErrorKind::range, "primes_in: lo > hi");
  }
  if (range.hi - range.lo > kMaxRangeWidth) {
    fail(ErrorKind::range, "primes_in: range wider than 10^9");
  }
  const u64 root = isqrt(range.hi);
  if (root > (u64{1} << 30)) {
    fail(ErrorKind::range, "primes_in: hi exceeds the base-prime budget");
  }
  const u64 lo = std::max<u64>(range.lo, 2);
  std::vector<u64> out;
  if (lo > range.hi) return out;

  const std::vector<u64> base = small_primes(root);
  std::vector<std::uint8_t> segment(kSieveSegment);
  for (u64 start = lo; start <= range.hi;) {
    const u64 len = std::min<u64>(kSieveSegment - 1, range.hi - start) + 1;
    std::fill_n(segment.begin(), len, std::uint8_t{1});
    for (const u64 p : base) {
      const u64 sq = p * p;
      if (sq > start + len - 1) break;
      u64 first = std::max(sq, (start + p - 1) / p * p);
      for (u64 j = first - start; j < len; j += p) segment[j] = 0;
    }
    for (u64 j = 0; j < len; ++j) {
      if (segment[j]) out.push_back(start + j);
    }
    if (range.hi - start < len) break;
    start += len;
  }
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (const u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are deterministic below 3.3 * 10^24.
  for (const u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

SpfTable::SpfTable(u64 max_value) {
  if (max_value < 1) fail(ErrorKind::parameter, "spf_table: M must be >= 1");
  if (max_value > kMaxSpfTable) {
    fail(ErrorKind::resource, "spf_table: M exceeds 10^8");
  }
  spf_.assign(max_value + 1, 0);
  for (u64 i = 2; i <= max_value; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    for (u64 j = i * i; j <= max_value; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::vector<u64> SpfTable::distinct_prime_factors(u64 m) const {
  std::vector<u64> out;
  while (m > 1) {
    const u64 p = spf_[m];
    out.push_back(p);
    while (m % p == 0) m /= p;
  }
  return out;
}

SpfTable spf_table(u64 max_value) { return SpfTable(max_value); }

namespace {

struct Rational {
  u64 num = 0;
  u64 den = 0;
};

// Best rational approximation of x in (0,1) with denominator <= 1000 that
// agrees with x to a few ulps, if any.
std::optional<Rational> small_rational(double x) {
  u64 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(rest);
    const u64 a = static_cast<u64>(a_f);
    const u64 h2 = a * h1 + h0;
    const u64 k2 = a * k1 + k0;
    if (k2 > 1000) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - x) <= 4 * std::numeric_limits<double>::epsilon() * x) {
      return Rational{h1, k1};
    }
    const double frac = rest - a_f;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

// Prime exponent vector of n (n < 2^32 in practice).
std::vector<std::pair<u64, u64>> factor_exponents(u64 n) {
  std::vector<std::pair<u64, u64>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    u64 e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Exact test of r^den == M^num.
bool is_exact_power_tie(u64 r, u64 M, Rational eta) {
  auto fr = factor_exponents(r);
  auto fm = factor_exponents(M);
  if (fr.size() != fm.size()) return false;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (fr[i].first != fm[i].first) return false;
    if (fr[i].second * eta.den != fm[i].second * eta.num) return false;
  }
  return true;
}

}  // namespace

u64 rough_prime_cutoff(double eta, u64 M) {
  const long double t = std::pow(static_cast<long double>(M), static_cast<long double>(eta));
  const long double r = std::round(t);
  if (r >= 1 && std::abs(t - r) <= 1e-9L * r) {
    const u64 candidate = static_cast<u64>(r);
    if (const auto q = small_rational(eta)) {
      if (is_exact_power_tie(candidate, M, *q)) return candidate;
      const long double lhs = static_cast<long double>(q->den) * std::log(static_cast<long double>(candidate));
      const long double rhs = static_cast<long double>(q->num) * std::log(static_cast<long double>(M));
      return lhs <= rhs ? candidate : candidate - 1;
    }
  }
  return static_cast<u64>(std::floor(t));
}

RoughSet rough_set(double eta, u64 M) {
  if (!(eta > 0.0 && eta < 1.0)) {
    fail(ErrorKind::parameter, "rough_set: eta must lie in (0, 1)");
  }
  if (M < 1) fail(ErrorKind::parameter, "rough_set: M must be >= 1");
  if (M > (u64{1} << 32)) fail(ErrorKind::resource, "rough_set: M exceeds 2^32");

  RoughSet out;
  out.eta = eta;
  out.M = M;
  out.threshold = std::pow(static_cast<double>(M), eta);
  out.prime_cutoff = std::min(rough_prime_cutoff(eta, M), M);

  std::vector<bool> removed(M + 1, false);
  for (const u64 p : small_primes(out.prime_cutoff)) {
    for (u64 j = p; j <= M; j += p) removed[j] = true;
  }
  for (u64 m = 1; m <= M; ++m) {
    if (!removed[m]) out.members.push_back(m);
  }
  if (M >= 2) {
    out.ratio_c0 = static_cast<double>(out.members.size()) * eta *
                   std::log(static_cast<double>(M)) / static_cast<double>(M);
  }
  return out;
}

void detail::LogAccumulator::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

EulerProduct mertens_product(double y) {
  if (!(y >= 2.0)) fail(ErrorKind::parameter, "mertens_product: y must be >= 2");
  detail::LogAccumulator acc;
  for (const u64 p : primes_in({2, static_cast<u64>(std::floor(y))})) {
    acc.add(std::log1p(-1.0 / static_cast<double>(p)));
  }
  EulerProduct out;
  out.value = std::exp(acc.sum());
  out.normalized = out.value * std::exp(kEulerGamma) * std::log(y);
  return out;
}

double feller_tornier_A(u64 p_max) {
  if (p_max < 2) fail(ErrorKind::parameter, "feller_tornier_A: p_max must be >= 2");
  detail::LogAccumulator acc;
  for (const u64 p : primes_in({2, p_max})) {
    const double pd = static_cast<double>(p);
    acc.add(std::log1p(-2.0 / (pd * pd)));
  }
  return std::exp(acc.sum());
}

std::vector<u64> SquarefreeWindow::odd_members() const {
  std::vector<u64> out;
  std::copy_if(members.begin(), members.end(), std::back_inserter(out),
               [](u64 n) { return n % 2 == 1; });
  return out;
}

std::vector<u64> SquarefreeWindow::members_in_class(u64 residue, u64 modulus) const {
  std::vector<u64> out;
  std::copy_if(members.begin(), members.end(), std::back_inserter(out),
               [=](u64 n) { return n % modulus == residue; });
  return out;
}

SquarefreeWindow squarefree_in_interval(u64 u, u64 h) {
  if (h < 1) fail(ErrorKind::parameter, "squarefree_in_interval: h must be >= 1");
  const u64 max = std::numeric_limits<u64>::max();
  if (u > max - h - 1) {
    fail(ErrorKind::range, "squarefree_in_interval: u + h + 1 overflows");
  }
  if (h > kMaxRangeWidth) {
    fail(ErrorKind::resource, "squarefree_in_interval: h exceeds 10^9");
  }
  const u64 lo = u + 1;
  const u64 hi = u + h + 1;  // one past the window, for the pair test
  std::vector<std::uint8_t> free(h + 1, 1);
  for (const u64 p : small_primes(isqrt(hi))) {
    const u64 sq = p * p;
    for (u64 j = (lo + sq - 1) / sq * sq - lo; j <= h; j += sq) free[j] = 0;
  }

  SquarefreeWindow out;
  out.u = u;
  out.h = h;
  for (u64 i = 0; i < h; ++i) {
    if (!free[i]) continue;
    out.members.push_back(lo + i);
    if (free[i + 1]) ++out.pair_count;
  }
  return out;
}

std::vector<u64> distinct_prime_factors(u64 q) {
  if (q == 0) fail(ErrorKind::parameter, "distinct_prime_factors: q must be >= 1");
  std::vector<u64> out;
  for (const u64 p : trial_division_primes()) {
    if (p * p > q) break;
    if (q % p != 0) continue;
    out.push_back(p);
    while (q % p == 0) q /= p;
  }
  if (q == 1) return out;
  if (is_prime(q)) {
    out.push_back(q);
  } else {
    const u64 r = isqrt(q);
    if (r * r != q || !is_prime(r)) {
      fail(ErrorKind::factorization,
           "cofactor " + std::to_string(q) + " is neither prime nor a prime square");
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoprimeCount coprime_count(u64 M, u64 q) {
  if (M < 1 || q < 1) fail(ErrorKind::parameter, "coprime_count: M and q must be >= 1");
  CoprimeCount out;
  out.prime_factors = distinct_prime_factors(q);
  const std::size_t w = out.prime_factors.size();
  if (w > 20) fail(ErrorKind::resource, "coprime_count: too many prime factors");

  i64 count = 0;
  for (u64 mask = 0; mask < (u64{1} << w); ++mask) {
    u128 d = 1;
    for (std::size_t i = 0; i < w; ++i) {
      if (mask >> i & 1) d *= out.prime_factors[i];
      if (d > M) break;
    }
    if (d > M) continue;
    const i64 term = static_cast<i64>(M / static_cast<u64>(d));
    count += (std::popcount(mask) & 1) ? -term : term;
  }
  out.count = static_cast<u64>(count);

  long double density = 1.0L;
  for (const u64 p : out.prime_factors) density *= 1.0L - 1.0L / static_cast<long double>(p);
  const long double main = density * static_cast<long double>(M);
  out.main_term = static_cast<double>(main);
  out.residual = static_cast<double>(static_cast<long double>(out.count) - main);
  return out;
}

}  // namespace qnr

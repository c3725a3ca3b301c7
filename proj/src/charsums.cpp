#include "qnr/charsums.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "qnr/error.hpp"

namespace qnr {

namespace {

void require_odd_modulus(u64 q, const char* who) {
  if (q < 3 || q % 2 == 0) {
    fail(ErrorKind::invalid_modulus,
         std::string(who) + ": q must be odd and >= 3, got " + std::to_string(q));
  }
}

void require_non_square(u64 q, const char* who) {
  if (is_perfect_square(q)) {
    fail(ErrorKind::perfect_square,
         std::string(who) + ": q = " + std::to_string(q) + " is a perfect square");
  }
}

}  // namespace

i64 incomplete_char_sum(u64 M, u64 q) {
  require_odd_modulus(q, "incomplete_char_sum");
  i64 sum = 0;
  for (u64 m = 1; m <= M; ++m) sum += jacobi(m, q).value();
  return sum;
}

u64 ceil_two_thirds_power(u64 q) {
  if (q > (u64{1} << 42)) fail(ErrorKind::range, "ceil_two_thirds_power: q too large");
  const u128 target = static_cast<u128>(q) * q;
  auto cube = [](u64 m) { return static_cast<u128>(m) * m * m; };
  u64 m = static_cast<u64>(std::cbrt(static_cast<double>(target)));
  while (m > 0 && cube(m - 1) >= target) --m;
  while (cube(m) < target) ++m;
  return m;
}

double burgess_q_exponent(int nu) {
  const double v = nu;
  return (v + 1.0) / (4.0 * v * v);
}

CharSumReport burgess_report(u64 M, u64 q, int nu) {
  require_odd_modulus(q, "burgess_report");
  require_non_square(q, "burgess_report");
  if (nu < 1) fail(ErrorKind::parameter, "burgess_report: nu must be >= 1");
  if (M < 1) fail(ErrorKind::parameter, "burgess_report: M must be >= 1");

  CharSumReport r;
  r.M = M;
  r.q = q;
  r.nu = nu;
  r.nu_beyond_three = nu > 3;
  r.sum = incomplete_char_sum(M, q);
  r.q_exponent = burgess_q_exponent(nu);
  r.burgess_main = std::pow(static_cast<double>(M), 1.0 - 1.0 / nu) *
                   std::pow(static_cast<double>(q), r.q_exponent);
  r.ratio = static_cast<double>(std::llabs(r.sum)) / r.burgess_main;
  return r;
}

RoughPartition rough_partition(const RoughSet& set, u64 q) {
  require_odd_modulus(q, "rough_partition");
  RoughPartition out;
  out.eta = set.eta;
  out.M = set.M;
  out.q = q;
  for (const u64 m : set.members) {
    const Sign3 s = jacobi(m, q);
    if (s.is_plus()) {
      ++out.count_plus;
    } else if (s.is_minus()) {
      ++out.count_minus;
    } else {
      ++out.count_zero;
    }
  }
  const double product =
      set.prime_cutoff >= 2 ? mertens_product(static_cast<double>(set.prime_cutoff)).value : 1.0;
  const double M = static_cast<double>(set.M);
  out.main_term = 0.5 * M * product;
  out.deviation_plus = std::abs(static_cast<double>(out.count_plus) - out.main_term);
  out.deviation_minus = std::abs(static_cast<double>(out.count_minus) - out.main_term);
  if (set.M >= 2) {
    out.error_scale = std::pow(set.eta, std::pow(set.eta, -0.5) / 4.0 - 1.0) * M / std::log(M);
  }
  return out;
}

RoughPartition rough_partition(double eta, u64 M, u64 q) {
  require_odd_modulus(q, "rough_partition");
  return rough_partition(rough_set(eta, M), q);
}

i64 rough_char_sum(double eta, u64 M, u64 q) {
  require_odd_modulus(q, "rough_char_sum");
  require_non_square(q, "rough_char_sum");
  const RoughSet set = rough_set(eta, M);
  const RoughPartition part = rough_partition(set, q);
  const i64 via_counts = static_cast<i64>(part.count_plus) - static_cast<i64>(part.count_minus);
  i64 direct = 0;
  for (const u64 m : set.members) direct += jacobi(m, q).value();
  if (direct != via_counts) {
    fail(ErrorKind::internal, "rough_char_sum: partition counts disagree with direct sum");
  }
  return direct;
}

}  // namespace qnr

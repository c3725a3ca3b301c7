#include "qnr/arith.hpp"

#include <bit>
#include <string>
#include <utility>

#include "qnr/error.hpp"

namespace qnr {

Sign3 jacobi(u64 m, u64 q) {
  if (q % 2 == 0) {
    fail(ErrorKind::invalid_modulus,
         "jacobi: modulus must be odd and positive, got " + std::to_string(q));
  }
  m %= q;
  int sign = 1;
  while (m != 0) {
    const int twos = std::countr_zero(m);
    m >>= twos;
    // (2/q) = -1 exactly when q = 3, 5 mod 8.
    if ((twos & 1) && ((q & 7) == 3 || (q & 7) == 5)) sign = -sign;
    std::swap(m, q);
    if ((m & 3) == 3 && (q & 3) == 3) sign = -sign;
    m %= q;
  }
  if (q != 1) return Sign3::zero();
  return sign > 0 ? Sign3::plus() : Sign3::minus();
}

Sign3 legendre_euler(u64 m, u64 p) {
  const u64 t = powmod(m, (p - 1) / 2, p);
  if (t == 1) return Sign3::plus();
  if (t == p - 1) return Sign3::minus();
  return Sign3::zero();
}

u64 powmod(u64 base, u64 exp, u64 modulus) {
  if (modulus == 0) fail(ErrorKind::invalid_modulus, "powmod: modulus must be >= 1");
  u64 result = 1 % modulus;
  base %= modulus;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, modulus);
    base = mulmod(base, base, modulus);
    exp >>= 1;
  }
  return result;
}

u64 isqrt(u64 n) {
  if (n < 2) return n;
  // Start above the root; Newton's iteration then decreases monotonically.
  u64 x = u64{1} << ((std::bit_width(n) + 1) / 2);
  while (true) {
    const u64 y = (x + n / x) / 2;
    if (y >= x) return x;
    x = y;
  }
}

bool is_perfect_square(u64 n) {
  const u64 r = isqrt(n);
  return r * r == n;
}

}  // namespace qnr

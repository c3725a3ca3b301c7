#pragma once

#include <cstdint>
#include <compare>

namespace qnr {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Value of a Jacobi or Legendre symbol.
class Sign3 {
 public:
  constexpr Sign3() = default;

  static constexpr Sign3 minus() { return Sign3(-1); }
  static constexpr Sign3 zero() { return Sign3(0); }
  static constexpr Sign3 plus() { return Sign3(1); }

  constexpr int value() const { return value_; }
  constexpr bool is_minus() const { return value_ < 0; }
  constexpr bool is_zero() const { return value_ == 0; }
  constexpr bool is_plus() const { return value_ > 0; }

  friend constexpr Sign3 operator*(Sign3 a, Sign3 b) {
    return Sign3(static_cast<int>(a.value_ * b.value_));
  }
  friend constexpr bool operator==(Sign3, Sign3) = default;

 private:
  explicit constexpr Sign3(int v) : value_(static_cast<std::int8_t>(v)) {}
  std::int8_t value_ = 0;
};

/// Jacobi symbol (m/q) for odd q >= 1, by repeated halving and reciprocity.
/// (m/1) = 1 for every m. Throws ErrorKind::invalid_modulus for even q.
Sign3 jacobi(u64 m, u64 q);

/// Legendre symbol through Euler's criterion. p must be an odd prime; this
/// is not checked.
Sign3 legendre_euler(u64 m, u64 p);

/// base^exp mod modulus with 128-bit intermediates.
u64 powmod(u64 base, u64 exp, u64 modulus);

/// (a * b) mod m without overflow.
constexpr u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

/// floor(sqrt(n)), integer arithmetic only.
u64 isqrt(u64 n);

bool is_perfect_square(u64 n);

}  // namespace qnr

#include "qnr/residue_scan.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "qnr/error.hpp"
#include "qnr/sieve.hpp"

namespace qnr {

namespace {

void require_odd_prime(u64 p, const char* who) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) {
    fail(ErrorKind::parameter, std::string(who) + ": " + std::to_string(p) +
                                   " is not an odd prime");
  }
}

void require_map_budget(u64 p, const char* who) {
  if (p > kMaxMapPrime) {
    fail(ErrorKind::resource, std::string(who) + ": p exceeds 2^31");
  }
}

}  // namespace

ResidueMap::ResidueMap(u64 p, bool zero_as_residue)
    : p_(p), zero_as_residue_(zero_as_residue) {
  require_odd_prime(p, "residue_map");
  require_map_budget(p, "residue_map");
  words_.assign((p + 63) / 64, 0);
  // k^2 mod p for k = 1..(p-1)/2, stepping (k+1)^2 = k^2 + 2k + 1.
  u64 square = 0;
  for (u64 k = 1; k <= (p - 1) / 2; ++k) {
    square += 2 * k - 1;
    if (square >= p) square %= p;
    words_[square >> 6] |= u64{1} << (square & 63);
  }
  if (zero_as_residue) words_[0] |= 1;
}

u64 ResidueMap::residue_count() const {
  u64 count = 0;
  for (const u64 w : words_) count += std::popcount(w);
  return zero_as_residue_ ? count - 1 : count;
}

ResidueMap residue_map(u64 p, bool zero_as_residue) {
  return ResidueMap(p, zero_as_residue);
}

u64 detail::least_nonresidue_unchecked(u64 p) {
  for (u64 n = 2;; ++n) {
    if (jacobi(n, p).is_minus()) return n;
  }
}

u64 least_nonresidue(u64 p) {
  require_odd_prime(p, "least_nonresidue");
  return detail::least_nonresidue_unchecked(p);
}

GapStats gap_stats(u64 p) {
  const ResidueMap map(p, true);
  GapStats out;
  out.p = p;
  out.n_seq.reserve((p - 1) / 2);
  for (u64 n = 1; n < p; ++n) {
    if (!map.is_residue(n)) out.n_seq.push_back(n);
  }
  out.deltas.reserve(out.n_seq.size());
  for (std::size_t k = 1; k < out.n_seq.size(); ++k) {
    out.deltas.push_back(out.n_seq[k] - out.n_seq[k - 1]);
  }
  return out;
}

GapTail gap_tail(const GapStats& stats, u64 h) {
  if (h == 0) fail(ErrorKind::parameter, "gap_tail: h must be at least 1");
  GapTail out;
  for (const u64 d : stats.deltas) {
    if (d >= h) {
      ++out.count;
      out.sum += d;
    }
  }
  return out;
}

u64 detail::first_nonresidue_after_unchecked(u64 p, u64 u, bool zero_as_residue) {
  const u64 start = u % p;
  u64 r = start;
  for (u64 h = 1; h <= p; ++h) {
    if (++r == p) r = 0;
    const Sign3 s = jacobi(r, p);
    if (s.is_minus() || (s.is_zero() && !zero_as_residue)) return h;
  }
  fail(ErrorKind::internal, "first_nonresidue_after: no non-residue within a full period");
}

bool detail::window_all_residues(u64 p, u64 u, u64 h, bool zero_as_residue) {
  u64 r = u % p;
  for (u64 i = 0; i < h; ++i) {
    if (++r == p) r = 0;
    const Sign3 s = jacobi(r, p);
    if (s.is_minus() || (s.is_zero() && !zero_as_residue)) return false;
  }
  return true;
}

u64 first_nonresidue_after(u64 p, u64 u, bool zero_as_residue) {
  require_odd_prime(p, "first_nonresidue_after");
  return detail::first_nonresidue_after_unchecked(p, u, zero_as_residue);
}

u64 longest_qr_run(u64 p, bool zero_as_residue) {
  const ResidueMap map(p, zero_as_residue);
  // Start right after a non-residue so the cyclic scan never splits a run.
  const u64 anchor = detail::least_nonresidue_unchecked(p);
  u64 best = 0;
  u64 run = 0;
  for (u64 i = 1; i <= p; ++i) {
    const u64 n = (anchor + i) % p;
    if (map.is_residue(n)) {
      best = std::max(best, ++run);
    } else {
      run = 0;
    }
  }
  return best;
}

u128 crt_adversarial_u(std::span<const Congruence> congruences) {
  std::unordered_set<u64> seen;
  for (const auto& c : congruences) {
    require_odd_prime(c.modulus, "crt_adversarial_u");
    if (!seen.insert(c.modulus).second) {
      fail(ErrorKind::parameter,
           "crt_adversarial_u: duplicate modulus " + std::to_string(c.modulus));
    }
  }

  u128 x = 0;
  u128 modulus = 1;
  for (const auto& c : congruences) {
    const u64 l = c.modulus;
    if (modulus > ~u128{0} / l) {
      fail(ErrorKind::resource, "crt_adversarial_u: modulus product exceeds 128 bits");
    }
    // x + modulus * t = residue (mod l), t = (residue - x) / modulus mod l.
    const u64 m_mod = static_cast<u64>(modulus % l);
    const u64 x_mod = static_cast<u64>(x % l);
    const u64 target = c.residue % l;
    const u64 diff = (target + l - x_mod) % l;
    const u64 inv = powmod(m_mod, l - 2, l);
    const u64 t = mulmod(diff, inv, l);
    x += modulus * t;
    modulus *= l;
  }

  for (const auto& c : congruences) {
    const u64 l = c.modulus;
    const u64 got = detail::first_nonresidue_after_unchecked(l, static_cast<u64>(x % l), true);
    const u64 want = detail::first_nonresidue_after_unchecked(l, c.residue % l, true);
    if (got != want) {
      fail(ErrorKind::internal, "crt_adversarial_u: postcondition failed for modulus " +
                                    std::to_string(l));
    }
  }
  return x;
}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace qnr

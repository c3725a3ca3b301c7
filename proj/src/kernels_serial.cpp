#include <cmath>

#include "qnr/error.hpp"
#include "qnr/kernels.hpp"
#include "qnr/residue_scan.hpp"

namespace qnr::kernels {

void ExceptionalTally::merge(const ExceptionalTally& later, std::size_t cap) {
  exceptional += later.exceptional;
  total += later.total;
  for (const u64 p : later.witnesses) {
    if (witnesses.size() >= cap) break;
    witnesses.push_back(p);
  }
}

GapTailRow gap_tail_row(u64 p, u64 h) {
  const GapTail tail = gap_tail(gap_stats(p), h);
  GapTailRow row;
  row.p = p;
  row.h = h;
  row.count = tail.count;
  row.sum = tail.sum;
  const double root = std::sqrt(static_cast<double>(p));
  const double hd = static_cast<double>(h);
  row.c1 = static_cast<double>(tail.count) * hd * hd / root;
  row.c2 = static_cast<double>(tail.sum) * hd / root;
  return row;
}

namespace serial {

std::vector<u64> least_nonresidues(std::span<const u64> primes) {
  std::vector<u64> out(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    out[i] = detail::least_nonresidue_unchecked(primes[i]);
  }
  return out;
}

ExceptionalTally count_exceptional(std::span<const u64> primes, u64 u, u64 h,
                                   bool zero_as_residue, std::size_t cap) {
  ExceptionalTally t;
  t.total = primes.size();
  for (const u64 p : primes) {
    if (!detail::window_all_residues(p, u, h, zero_as_residue)) continue;
    ++t.exceptional;
    if (t.witnesses.size() < cap) t.witnesses.push_back(p);
  }
  return t;
}

std::vector<GapTailRow> gap_tails(std::span<const u64> primes, std::span<const u64> hs) {
  if (primes.size() != hs.size()) fail(ErrorKind::parameter, "gap_tails: size mismatch");
  std::vector<GapTailRow> out;
  out.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) out.push_back(gap_tail_row(primes[i], hs[i]));
  return out;
}

u64 squared_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns) {
  u64 total = 0;
  for (const u64 m : moduli) {
    i64 inner = 0;
    for (const u64 n : ns) inner += jacobi(n, m).value();
    total += static_cast<u64>(inner * inner);
  }
  return total;
}

i64 swapped_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns) {
  i64 total = 0;
  for (const u64 n1 : ns) {
    for (const u64 n2 : ns) {
      const u64 q = n1 * n2;
      for (const u64 m : moduli) total += jacobi(m, q).value();
    }
  }
  return total;
}

}  // namespace serial
}  // namespace qnr::kernels

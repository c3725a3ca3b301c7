#include <omp.h>

#include <algorithm>
#include <string>

#include "qnr/error.hpp"
#include "qnr/kernels.hpp"
#include "qnr/residue_scan.hpp"
#include "qnr/sieve.hpp"

namespace qnr::kernels::omp {

namespace {

int checked_workers(int workers) {
  if (workers < 1) fail(ErrorKind::parameter, "workers must be >= 1");
  return workers;
}

std::ptrdiff_t block_count(std::size_t n) {
  return static_cast<std::ptrdiff_t>((n + kBlockSize - 1) / kBlockSize);
}

// Inputs are checked up front: an exception must not leave a parallel region.
void require_odd_moduli(std::span<const u64> values, const char* who, bool allow_one) {
  for (const u64 v : values) {
    if (v % 2 == 0 || (v == 1 && !allow_one)) {
      fail(ErrorKind::invalid_modulus, std::string(who) + ": even or unit modulus " + std::to_string(v));
    }
  }
}

void require_scan_primes(std::span<const u64> primes, const char* who) {
  require_odd_moduli(primes, who, false);
  for (const u64 p : primes) {
    if (is_perfect_square(p)) {
      fail(ErrorKind::parameter, std::string(who) + ": " + std::to_string(p) + " is not prime");
    }
  }
}

}  // namespace

std::vector<u64> least_nonresidues(std::span<const u64> primes, int workers) {
  require_scan_primes(primes, "least_nonresidues");
  std::vector<u64> out(primes.size());
  const auto n = static_cast<std::ptrdiff_t>(primes.size());
#pragma omp parallel for schedule(static) num_threads(checked_workers(workers))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = detail::least_nonresidue_unchecked(primes[i]);
  }
  return out;
}

ExceptionalTally count_exceptional(std::span<const u64> primes, u64 u, u64 h, int workers,
                                   bool zero_as_residue, std::size_t cap) {
  require_scan_primes(primes, "count_exceptional");
  const std::ptrdiff_t blocks = block_count(primes.size());
  std::vector<ExceptionalTally> parts(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic, 1) num_threads(checked_workers(workers))
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t len = std::min(kBlockSize, primes.size() - lo);
    parts[b] = serial::count_exceptional(primes.subspan(lo, len), u, h, zero_as_residue, cap);
  }
  ExceptionalTally out;
  for (const auto& part : parts) out.merge(part, cap);
  return out;
}

std::vector<GapTailRow> gap_tails(std::span<const u64> primes, std::span<const u64> hs,
                                  int workers) {
  if (primes.size() != hs.size()) fail(ErrorKind::parameter, "gap_tails: size mismatch");
  for (const u64 p : primes) {
    if (p < 3 || p % 2 == 0 || p > kMaxMapPrime || !is_prime(p)) {
      fail(ErrorKind::parameter, "gap_tails: " + std::to_string(p) + " is not an odd prime within budget");
    }
  }
  std::vector<GapTailRow> out(primes.size());
  const auto n = static_cast<std::ptrdiff_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(checked_workers(workers))
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = gap_tail_row(primes[i], hs[i]);
  return out;
}

u64 squared_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns, int workers) {
  require_odd_moduli(moduli, "squared_symbol_sum", true);
  u64 total = 0;
  const auto n = static_cast<std::ptrdiff_t>(moduli.size());
#pragma omp parallel for schedule(static) reduction(+ : total) num_threads(checked_workers(workers))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    i64 inner = 0;
    for (const u64 v : ns) inner += jacobi(v, moduli[i]).value();
    total += static_cast<u64>(inner * inner);
  }
  return total;
}

i64 swapped_symbol_sum(std::span<const u64> moduli, std::span<const u64> ns, int workers) {
  require_odd_moduli(ns, "swapped_symbol_sum", true);
  i64 total = 0;
  const auto pairs = static_cast<std::ptrdiff_t>(ns.size() * ns.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total) num_threads(checked_workers(workers))
  for (std::ptrdiff_t k = 0; k < pairs; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const u64 q = ns[i / ns.size()] * ns[i % ns.size()];
    i64 partial = 0;
    for (const u64 m : moduli) partial += jacobi(m, q).value();
    total += partial;
  }
  return total;
}

}  // namespace qnr::kernels::omp

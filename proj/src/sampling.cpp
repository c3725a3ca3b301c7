#include "qnr/sampling.hpp"

#include "qnr/error.hpp"

namespace qnr {

std::vector<u64> sample_u_values(u64 seed, std::size_t count, u64 max) {
  SeededSampler sampler(seed);
  std::vector<u64> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.below(max + 1));
  return out;
}

std::vector<u64> sample_odd_nonsquares(u64 seed, std::size_t count, u64 lo, u64 hi) {
  if (lo > hi) fail(ErrorKind::parameter, "sample_odd_nonsquares: lo > hi");
  if (hi < 3) fail(ErrorKind::parameter, "sample_odd_nonsquares: no odd modulus >= 3 in range");
  SeededSampler sampler(seed);
  std::vector<u64> out;
  out.reserve(count);
  while (out.size() < count) {
    const u64 q = sampler.in_range(lo, hi);
    if (q >= 3 && q % 2 == 1 && !is_perfect_square(q)) out.push_back(q);
  }
  return out;
}

}  // namespace qnr

#include <gtest/gtest.h>

#include "qnr/kernels.hpp"
#include "qnr/residue_scan.hpp"
#include "qnr/sieve.hpp"
#include "test_support.hpp"

namespace qnr::kernels {
namespace {

const std::vector<u64>& scan_primes() {
  static const auto primes = primes_in({100'000, 200'000});
  return primes;
}

bool same(const ExceptionalTally& a, const ExceptionalTally& b) {
  return a.exceptional == b.exceptional && a.total == b.total && a.witnesses == b.witnesses;
}

TEST(Kernels, LeastNonresiduesSerialEqualsParallel) {
  const auto& ps = scan_primes();
  const auto ref = serial::least_nonresidues(ps);
  for (std::size_t i = 0; i < ps.size(); i += 101) ASSERT_EQ(ref[i], least_nonresidue(ps[i]));
  for (int w : {1, 2, 4, 8}) EXPECT_EQ(omp::least_nonresidues(ps, w), ref) << w;
}

TEST(Kernels, ExceptionalSerialEqualsParallel) {
  const auto& ps = scan_primes();
  for (u64 u : {0ULL, 7ULL, 150'000ULL, 1ULL << 40}) {
    for (u64 h : {1ULL, 2ULL, 5ULL, 12ULL}) {
      for (bool z : {true, false}) {
        const auto ref = serial::count_exceptional(ps, u, h, z);
        for (int w : {1, 2, 4, 8}) {
          ASSERT_TRUE(same(omp::count_exceptional(ps, u, h, w, z), ref)) << u << " " << h << " " << w;
        }
      }
    }
  }
}

TEST(Kernels, ExceptionalMatchesDefinition) {
  const auto& ps = scan_primes();
  const u64 u = 12345;
  const u64 h = 3;
  const auto t = serial::count_exceptional(ps, u, h, true, 50);
  u64 brute = 0;
  std::vector<u64> witnesses;
  for (u64 p : ps) {
    if (first_nonresidue_after(p, u) > h) {
      ++brute;
      if (witnesses.size() < 50) witnesses.push_back(p);
    }
  }
  EXPECT_EQ(t.exceptional, brute);
  EXPECT_EQ(t.total, ps.size());
  EXPECT_EQ(t.witnesses, witnesses);
}

TEST(Kernels, WitnessCapAcrossBlocks) {
  const auto& ps = scan_primes();
  const auto ref = serial::count_exceptional(ps, 0, 1, true, 5000);
  ASSERT_GT(ref.exceptional, 5000u);
  for (int w : {1, 3, 8}) {
    const auto t = omp::count_exceptional(ps, 0, 1, w, true, 5000);
    EXPECT_TRUE(same(t, ref));
    EXPECT_EQ(t.witnesses.size(), 5000u);
  }
}

TEST(Kernels, MergeKeepsOrderAndCap) {
  ExceptionalTally a{2, 10, {3, 5}};
  const ExceptionalTally b{3, 7, {11, 13, 17}};
  a.merge(b, 4);
  EXPECT_EQ(a.exceptional, 5u);
  EXPECT_EQ(a.total, 17u);
  EXPECT_EQ(a.witnesses, (std::vector<u64>{3, 5, 11, 13}));
}

TEST(Kernels, GapTailsSerialEqualsParallel) {
  const auto ps = primes_in({3, 20'000});
  std::vector<u64> hs;
  for (u64 p : ps) hs.push_back(1 + p % 7);
  const auto ref = serial::gap_tails(ps, hs);
  for (int w : {1, 2, 4, 8}) {
    const auto rows = omp::gap_tails(ps, hs, w);
    ASSERT_EQ(rows.size(), ref.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ASSERT_EQ(rows[i].count, ref[i].count);
      ASSERT_EQ(rows[i].sum, ref[i].sum);
      ASSERT_EQ(rows[i].c1, ref[i].c1);
      ASSERT_EQ(rows[i].c2, ref[i].c2);
    }
  }
}

TEST(Kernels, GapTailRowExample) {
  const auto row = gap_tail_row(11, 2);
  EXPECT_EQ(row.count, 2u);
  EXPECT_EQ(row.sum, 6u);
  EXPECT_NEAR(row.c1, 2 * 4 / std::sqrt(11.0), 1e-12);
  EXPECT_NEAR(row.c1, 2.412, 5e-4);
  EXPECT_NEAR(row.c2, 6 * 2 / std::sqrt(11.0), 1e-12);
  const auto empty = gap_tail_row(11, 5);
  EXPECT_EQ(empty.count, 0u);
  EXPECT_EQ(empty.c1, 0.0);
  EXPECT_EQ(empty.c2, 0.0);
}

TEST(Kernels, SymbolSumsSerialEqualsParallel) {
  const auto moduli = primes_in({3'001, 9'000});
  const std::vector<u64> ns{3, 7, 11, 15, 19, 23, 31, 35};
  const u64 ref = serial::squared_symbol_sum(moduli, ns);
  const i64 swapped = serial::swapped_symbol_sum(moduli, ns);
  for (int w : {1, 2, 4, 8}) {
    EXPECT_EQ(omp::squared_symbol_sum(moduli, ns, w), ref);
    EXPECT_EQ(omp::swapped_symbol_sum(moduli, ns, w), swapped);
  }
  EXPECT_LE(ref, moduli.size() * ns.size() * ns.size());
}

TEST(Kernels, ValidationBeforeParallelRegion) {
  const std::vector<u64> bad_even{3, 5, 8};
  const std::vector<u64> bad_composite{3, 5, 9};
  const std::vector<u64> good{3, 5, 7};
  EXPECT_QNR_ERROR(omp::least_nonresidues(bad_even, 4), ErrorKind::invalid_modulus);
  EXPECT_QNR_ERROR(omp::least_nonresidues(bad_composite, 4), ErrorKind::parameter);
  EXPECT_QNR_ERROR(omp::count_exceptional(bad_composite, 0, 2, 4), ErrorKind::parameter);
  EXPECT_QNR_ERROR(omp::count_exceptional(good, 0, 2, 0), ErrorKind::parameter);
  const std::vector<u64> hs{1, 2};
  EXPECT_QNR_ERROR(omp::gap_tails(good, hs, 2), ErrorKind::parameter);
  EXPECT_QNR_ERROR(omp::squared_symbol_sum(bad_even, good, 2), ErrorKind::invalid_modulus);
  EXPECT_QNR_ERROR(omp::swapped_symbol_sum(good, bad_even, 2), ErrorKind::invalid_modulus);
}

}  // namespace
}  // namespace qnr::kernels

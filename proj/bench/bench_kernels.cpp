// Serial reference kernels against the OpenMP versions on the same inputs.

#include <benchmark/benchmark.h>

#include "qnr/kernels.hpp"
#include "qnr/sampling.hpp"
#include "qnr/sieve.hpp"

namespace {

using qnr::u64;

const std::vector<u64>& dyadic_primes() {
  static const auto primes = qnr::primes_in({1'000'000, 2'000'000});
  return primes;
}

const std::vector<u64>& small_primes() {
  static const auto primes = qnr::primes_in({3, 1'000'000});
  return primes;
}

void BM_LeastNonresiduesSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qnr::kernels::serial::least_nonresidues(small_primes()));
  state.SetItemsProcessed(state.iterations() * small_primes().size());
}

void BM_LeastNonresiduesOmp(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnr::kernels::omp::least_nonresidues(small_primes(), workers));
  }
  state.SetItemsProcessed(state.iterations() * small_primes().size());
}

void BM_ExceptionalSerial(benchmark::State& state) {
  const u64 h = static_cast<u64>(state.range(0));
  const u64 u = qnr::sample_u_values(2014, 1, 2'000'000).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnr::kernels::serial::count_exceptional(dyadic_primes(), u, h));
  }
  state.SetItemsProcessed(state.iterations() * dyadic_primes().size());
}

void BM_ExceptionalOmp(benchmark::State& state) {
  const u64 h = static_cast<u64>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  const u64 u = qnr::sample_u_values(2014, 1, 2'000'000).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnr::kernels::omp::count_exceptional(dyadic_primes(), u, h, workers));
  }
  state.SetItemsProcessed(state.iterations() * dyadic_primes().size());
}

void BM_SquaredSymbolSumSerial(benchmark::State& state) {
  const auto moduli = qnr::primes_in({100'000, 200'000});
  const std::vector<u64> ns{3, 7, 11, 15, 19, 23, 31, 35, 39, 43, 47};
  for (auto _ : state) benchmark::DoNotOptimize(qnr::kernels::serial::squared_symbol_sum(moduli, ns));
}

void BM_SquaredSymbolSumOmp(benchmark::State& state) {
  const auto moduli = qnr::primes_in({100'000, 200'000});
  const std::vector<u64> ns{3, 7, 11, 15, 19, 23, 31, 35, 39, 43, 47};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnr::kernels::omp::squared_symbol_sum(moduli, ns, workers));
  }
}

}  // namespace

BENCHMARK(BM_LeastNonresiduesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeastNonresiduesOmp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExceptionalSerial)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExceptionalOmp)
    ->ArgsProduct({{5, 20}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SquaredSymbolSumSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SquaredSymbolSumOmp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

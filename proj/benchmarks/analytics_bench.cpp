#include <benchmark/benchmark.h>

#include "gearsieve/correlation.hpp"
#include "gearsieve/fourier.hpp"
#include "gearsieve/primes.hpp"

namespace gs = gearsieve;

static void BM_WeightedErgodicSum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::weighted_ergodic_sum(state.range(0)).weighted_sum);
  }
}
BENCHMARK(BM_WeightedErgodicSum)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_OffDiagonalSplit(benchmark::State& state) {
  const std::int64_t m0 = state.range(0);
  const auto primes = gs::odd_primes_up_to(m0);
  const std::int64_t n = (m0 * m0 - 7 + 1) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::off_diagonal_split(gs::Constellation::twins(), primes, n));
  }
}
BENCHMARK(BM_OffDiagonalSplit)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_OffDiagonalExact(benchmark::State& state) {
  const std::int64_t m0 = state.range(0);
  const auto primes = gs::odd_primes_up_to(m0);
  const std::int64_t n = (m0 * m0 - 7 + 1) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::off_diagonal_exact(gs::Constellation::twins(), primes, n));
  }
}
BENCHMARK(BM_OffDiagonalExact)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_TauFourier(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::tau_fourier(state.range(0)));
  }
}
BENCHMARK(BM_TauFourier)->Arg(97)->Arg(997);

#include <benchmark/benchmark.h>

#include "seba/arithmetic.hpp"
#include "seba/multifractal.hpp"
#include "seba/spectral.hpp"
#include "seba/zeta.hpp"

namespace {

void BM_r2(benchmark::State& state) {
  std::uint64_t n = 1000003ull * 999983ull;
  for (auto _ : state) {
    benchmark::DoNotOptimize(seba::arithmetic::r2(n));
    n += 2;
  }
}
BENCHMARK(BM_r2);

void BM_shells(benchmark::State& state) {
  const auto x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(seba::arithmetic::shells_up_to(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_shells)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_epstein(benchmark::State& state) {
  const seba::zeta::QuadraticForm q(1.3);
  for (auto _ : state) benchmark::DoNotOptimize(seba::zeta::epstein_zeta(q, {0.3, 2.0}));
}
BENCHMARK(BM_epstein);

void BM_shifted_zeta(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(seba::zeta::shifted_zeta(lambda, 2.0, 1e-8));
}
BENCHMARK(BM_shifted_zeta)->Arg(10)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_solve_secular(benchmark::State& state) {
  const double hi = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(seba::spectral::solve_secular({0.0, hi}, 0.0));
}
BENCHMARK(BM_solve_secular)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_measure(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(seba::multifractal::spectral_measure(1234.5));
}
BENCHMARK(BM_measure)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

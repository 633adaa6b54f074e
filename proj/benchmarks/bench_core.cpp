#include <benchmark/benchmark.h>

#include "padicrmt/markov.hpp"
#include "padicrmt/matrix.hpp"
#include "padicrmt/qseries.hpp"
#include "padicrmt/rng.hpp"
#include "padicrmt/roots.hpp"

using namespace padicrmt;

static void BM_Charpoly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1, 0);
  const PadicMatrix a = sample_matrix(n, 3, 10, MatrixMode::MAT, rng);
  for (auto _ : state) benchmark::DoNotOptimize(charpoly(a));
}
BENCHMARK(BM_Charpoly)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_SmithPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2, 0);
  const PadicMatrix a = sample_matrix(n, 2, 12, MatrixMode::MAT, rng);
  for (auto _ : state) benchmark::DoNotOptimize(smith_partition(a));
}
BENCHMARK(BM_SmithPartition)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_Census(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bool quadratic = state.range(1) != 0;
  Rng rng(3, 0);
  for (auto _ : state) {
    const PadicMatrix a = sample_matrix(n, 3, 10, MatrixMode::MAT, rng);
    benchmark::DoNotOptimize(eigenvalue_census(a, CensusOptions{quadratic}));
  }
}
BENCHMARK(BM_Census)->Args({6, 0})->Args({6, 1})->Args({8, 0})->Args({8, 1});

static void BM_IslandResidue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::uint32_t p = static_cast<std::uint32_t>(state.range(1));
  const FpPoly F = FpPoly::x(p);
  Rng rng(4, 0);
  std::vector<std::uint32_t> a(static_cast<std::size_t>(n) * n);
  for (auto _ : state) {
    for (auto& x : a) x = static_cast<std::uint32_t>(rng.uniform(p));
    benchmark::DoNotOptimize(island_multiplicity_fp(a, n, F));
  }
}
BENCHMARK(BM_IslandResidue)->Args({50, 2})->Args({50, 3});

static void BM_QpochInfinite(benchmark::State& state) {
  const double t = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qpoch(t, t, kInfinity));
}
BENCHMARK(BM_QpochInfinite)->Arg(2)->Arg(3)->Arg(101);

static void BM_Theta3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(theta3(-1.7320508075688772, 1.0 / 27.0));
}
BENCHMARK(BM_Theta3);

static void BM_TwoPointExpectation(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(andrews_gordon_expectation(0.5, m, AgVariant::SQ_INV));
}
BENCHMARK(BM_TwoPointExpectation)->Arg(1)->Arg(3);

static void BM_MarkovSpectral(benchmark::State& state) {
  const MarkovParams mp{0.5, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(markov_spectral(mp, static_cast<int>(state.range(0)), ConventionPolicy::LIMIT));
}
BENCHMARK(BM_MarkovSpectral)->Arg(10)->Arg(30);
BENCHMARK_MAIN();

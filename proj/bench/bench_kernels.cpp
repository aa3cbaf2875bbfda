// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "relcat/rel.hpp"
#include "relcat/search.hpp"

using namespace relcat;

namespace {

Rel random_rel(std::size_t a, std::size_t b, double density, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution bit(density);
  Rel r{FiniteSet(a), FiniteSet(b)};
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (bit(rng)) r.set(i, j);
    }
  }
  return r;
}

SearchSpec search_spec(std::size_t p, std::size_t k, std::size_t c) {
  SearchSpec s;
  s.P = p;
  s.K = k;
  s.C = c;
  s.constraints = {Constraint::Correctness};
  return s;
}

void BM_compose_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Rel r = random_rel(n, n, 0.05, 1), s = random_rel(n, n, 0.05, 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::compose_serial(r, s));
  st.SetComplexityN(st.range(0));
}

void BM_compose_parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Rel r = random_rel(n, n, 0.05, 1), s = random_rel(n, n, 0.05, 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::compose_parallel(r, s));
  st.SetComplexityN(st.range(0));
}

void BM_enumerate_serial(benchmark::State& st) {
  const SearchSpec spec = search_spec(1, 2, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::enumerate_serial(spec));
}

void BM_enumerate_parallel(benchmark::State& st) {
  const SearchSpec spec = search_spec(1, 2, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::enumerate_parallel(spec));
}

}  // namespace

BENCHMARK(BM_compose_serial)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_compose_parallel)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_enumerate_serial)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_parallel)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "wreath/graphs.hpp"
#include "wreath/spectral.hpp"
#include "wreath/wreath_product.hpp"
#include "wreath_cli/bench.hpp"

using namespace wreath;

static void BM_ReducedSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto [a, spec] = cli::bench_instance(n, m, 7);
  for (auto _ : state) {
    auto values = spectrum_reduced_values(a, spec);
    benchmark::DoNotOptimize(values.data());
  }
  state.counters["order"] = static_cast<double>(wreath_order(n, m));
}

// Materialize, densify, general eigensolve.
static void BM_DenseSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto [a, spec] = cli::bench_instance(n, m, 7);
  const DenseMatrix b = spec.to_matrix();
  for (auto _ : state) {
    auto values = dense_eigenvalues(to_dense(wreath_product(a, b)));
    benchmark::DoNotOptimize(values.data());
  }
  state.counters["order"] = static_cast<double>(wreath_order(n, m));
}

static void BM_WreathProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto [a, spec] = cli::bench_instance(n, m, 7);
  const DenseMatrix b = spec.to_matrix();
  for (auto _ : state) {
    SparseMatrix w = wreath_product(a, b);
    benchmark::DoNotOptimize(w.nnz());
  }
  state.counters["order"] = static_cast<double>(wreath_order(n, m));
}

static void BM_LamplighterClosedForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto s = lamp_parts_union(complete_lamplighter_spectrum(n));
    benchmark::DoNotOptimize(s.total());
  }
}

static void BM_LamplighterReduction(benchmark::State& state) {
  const Graph g = Graph::complete(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto s = lamp_spectrum_by_reduction(g);
    benchmark::DoNotOptimize(s.total());
  }
}

BENCHMARK(BM_ReducedSpectrum)
    ->Args({2, 3})->Args({3, 3})->Args({4, 3})->Args({3, 5})->Args({6, 4})->Args({8, 3})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DenseSpectrum)
    ->Args({2, 3})->Args({3, 3})->Args({4, 3})->Args({3, 5})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WreathProduct)
    ->Args({3, 3})->Args({4, 3})->Args({6, 4})->Args({8, 3})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LamplighterClosedForm)->DenseRange(3, 9, 2);
BENCHMARK(BM_LamplighterReduction)->DenseRange(3, 9, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

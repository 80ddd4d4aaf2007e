#include "wreath_cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <vector>

#include "wreath/wreath_product.hpp"

namespace wreath::cli {

namespace {

template <class F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<Complex> dense_route(const DenseMatrix& a, const CirculantSpec& spec,
                                 const Limits& limits) {
  const DenseMatrix full = to_dense(wreath_product(a, spec.to_matrix(), limits), limits);
  return dense_eigenvalues(full, limits);
}

}  // namespace

std::pair<DenseMatrix, CirculantSpec> bench_instance(std::size_t n, std::size_t m,
                                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> entries(n * n);
  for (auto& z : entries) z = Complex(u(gen), u(gen));
  CirculantSpec spec;
  spec.coefficients.resize(m);
  for (auto& z : spec.coefficients) z = Complex(u(gen), u(gen));
  return {DenseMatrix(n, n, std::move(entries)), std::move(spec)};
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.repeat < 5) {
    throw Error(ErrorKind::kInvalidArgument, "bench: --repeat must be at least 5");
  }
  if (config.n == 0 || config.m == 0) {
    throw Error(ErrorKind::kInvalidArgument, "bench: --n and --m must be positive");
  }
  BenchReport report;
  report.config = config;
  report.order = wreath_order(config.n, config.m);
  report.blocks = checked_pow(config.m, config.n);

  const auto [a, spec] = bench_instance(config.n, config.m, config.seed);
  SpectrumOptions options;
  options.threads = config.threads;
  Limits limits;
  limits.dense_eigen_order = config.dense_cap;

  const bool dense_ok = report.order <= config.dense_cap;
  // Warm-up run doubles as the correctness check.
  const auto reduced = spectrum_reduced_values(a, spec, options);
  if (dense_ok) {
    const auto dense = dense_route(a, spec, limits);
    if (!eigen_values_diff(reduced, dense, config.tol).equal) {
      report.verdict = "unequal";
      return report;
    }
    report.verdict = "equal";
  } else {
    report.verdict = "dense-skipped";
  }

  std::vector<double> reduced_times;
  std::vector<double> dense_times;
  for (std::size_t r = 0; r < config.repeat; ++r) {
    reduced_times.push_back(
        time_ms([&] { (void)spectrum_reduced_values(a, spec, options); }));
    if (dense_ok) {
      dense_times.push_back(time_ms([&] { (void)dense_route(a, spec, limits); }));
    }
  }
  report.reduced_ms = median(reduced_times);
  if (dense_ok) {
    report.dense_ms = median(dense_times);
    report.speedup = *report.dense_ms / std::max(report.reduced_ms, 1e-9);
  }
  return report;
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["n"] = report.config.n;
  j["m"] = report.config.m;
  j["order"] = report.order;
  j["blocks"] = report.blocks;
  j["repeat"] = report.config.repeat;
  j["seed"] = report.config.seed;
  j["tol"] = report.config.tol;
  j["dense_cap"] = report.config.dense_cap;
  j["verdict"] = report.verdict;
  if (report.verdict == "unequal") {
    j["reduced_ms"] = nullptr;
  } else {
    j["reduced_ms"] = report.reduced_ms;
  }
  j["dense_ms"] = report.dense_ms ? nlohmann::json(*report.dense_ms) : nlohmann::json();
  j["speedup"] = report.speedup ? nlohmann::json(*report.speedup) : nlohmann::json();
  return j;
}

}  // namespace wreath::cli

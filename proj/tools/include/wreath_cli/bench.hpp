#pragma once

// Reduced vs dense spectrum timing on one random circulant instance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "wreath/spectral.hpp"

namespace wreath::cli {

struct BenchConfig {
  std::size_t n = 2;
  std::size_t m = 3;
  std::size_t repeat = 5;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double tol = 1e-8;
  /// Largest order the dense path is allowed to materialize.
  std::size_t dense_cap = 1024;
};

struct BenchReport {
  BenchConfig config;
  std::uint64_t order = 0;
  std::uint64_t blocks = 0;
  double reduced_ms = 0.0;
  std::optional<double> dense_ms;
  std::optional<double> speedup;
  /// "equal", "unequal" or "dense-skipped".
  std::string verdict;
};

/// A with entries uniform on the unit square, B = circ(b) likewise.
std::pair<DenseMatrix, CirculantSpec> bench_instance(std::size_t n, std::size_t m,
                                                     std::uint64_t seed);

/// Verifies both methods agree before timing anything. An "unequal" report
/// carries no timings.
BenchReport run_bench(const BenchConfig& config);

nlohmann::json to_json(const BenchReport& report);

}  // namespace wreath::cli

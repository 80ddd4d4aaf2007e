#pragma once

// Generalized Sylvester equations  sum_i A_i X B_i = C.
//
// Column-stacking turns the equation into
//   (B_1^T kron A_1 + ... + B_k^T kron A_k) vec(X) = vec(C).
// For the wreath instance (A_1 = A, A_h = C_{h-1}; B_1 = I_m^(kron n),
// B_h = (I_m^(kron h-2) kron B kron I_m^(kron n-h+1))^T) the coefficient is
// exactly A wr B.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/spectral.hpp"
#include "wreath/tensor.hpp"

namespace wreath {

struct CoefficientPair {
  SparseMatrix a;  // n x m
  SparseMatrix b;  // s x t
};

struct SylvesterSystem {
  std::vector<CoefficientPair> pairs;
  DenseMatrix rhs;  // n x t

  /// Shape of the unknown X (m x s).
  std::pair<std::size_t, std::size_t> unknown_shape() const;
  /// Throws kDimensionMismatch unless every pair and the right side agree.
  void validate() const;
};

struct WreathSylvesterSpec {
  DenseMatrix a;    // order n
  DenseMatrix b;    // order m
  DenseMatrix rhs;  // n x m^n
};

/// sum_i B_i^T kron A_i, shape (n t) x (m s).
SparseMatrix assemble_coefficient(const SylvesterSystem& sys,
                                  const Limits& limits = {});

/// sum_i A_i X B_i.
DenseMatrix apply_operator(const SylvesterSystem& sys, const DenseMatrix& x);

/// The n + 1 pairs of the wreath instance. An empty rhs becomes the zero
/// n x m^n matrix.
SylvesterSystem expand_wreath_system(const WreathSylvesterSpec& spec,
                                     const Limits& limits = {});

struct SolveOptions {
  /// Singular when the smallest pivot is below this times the largest.
  double pivot_ratio = 1e-10;
  /// Declared bound on the relative residual ||sum A X B - C|| / max(1, ||C||).
  double residual_tol = 1e-8;
  Limits limits = {};
};

struct SolveResult {
  DenseMatrix x;
  double residual = 0.0;  // Frobenius norm of sum A_i X B_i - C
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

/// Unique solve by LU with partial pivoting on the assembled coefficient.
/// Non-square systems are rejected (kDimensionMismatch); rank deficiency
/// throws kSingularCoefficient.
SolveResult solve(const SylvesterSystem& sys, const SolveOptions& options = {});

struct UniquenessReport {
  enum class Route { kClosedForm, kReducedSpectrum, kDenseSpectrum };
  bool unique = true;
  Route route = Route::kClosedForm;
  /// Closed-form route: the first offending diagonal entry.
  std::optional<SingularityWitness> witness;
  /// Spectral routes: an eigenvalue within tol of zero.
  std::optional<Complex> zero_eigenvalue;
};

const char* to_string(UniquenessReport::Route route);

/// Whether the wreath system has a unique solution, i.e. A wr B is
/// nonsingular. Diagonal A with B = h J_m is decided in closed form without
/// building anything; circulant B through the reduced blocks; anything else
/// through the dense spectrum of the materialized product.
UniquenessReport wreath_unique_solvable(const DenseMatrix& a, const DenseMatrix& b,
                                        double tol = 1e-9,
                                        const Limits& limits = {});

/// h if b = h J_m within tol.
std::optional<Complex> uniform_value(const DenseMatrix& b, double tol = 0.0);

/// Solves the wreath instance; a singular coefficient is reported with the
/// closed-form witness when one applies.
SolveResult solve_wreath(const WreathSylvesterSpec& spec,
                         const SolveOptions& options = {});

// System files:
//   {"pairs": [{"A": matrix, "B": matrix}, ...], "C": matrix}
//   {"wreath": {"A": matrix, "B": matrix}, "C": matrix}
struct SystemFile {
  std::optional<WreathSylvesterSpec> wreath;
  SylvesterSystem system;  // expanded when wreath is set
};
SystemFile system_from_json(const nlohmann::json& j, const Limits& limits = {});
nlohmann::json to_json(const UniquenessReport& report);

}  // namespace wreath

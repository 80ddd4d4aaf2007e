#pragma once

// Complex dense/sparse matrices, Kronecker products, canonical basis
// matrices and the column-stacking vec operator.
//
// Storage indices are 0-based everywhere in this header. Canonical basis
// labels follow the usual mathematical convention instead: projectors C_i
// and units E_ij take 1-based labels, cyclic shifts Circ_i take 0-based
// shift amounts.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "wreath/error.hpp"

namespace wreath {

using Complex = std::complex<double>;

/// Size guards. Exceeding any of them raises kDimensionOverflow (or
/// kEnumerationOverflow for the tuple cap) instead of allocating.
struct Limits {
  std::uint64_t dense_entries = std::uint64_t{1} << 26;
  std::uint64_t sparse_order = std::uint64_t{1} << 30;
  std::uint64_t enumeration = std::uint64_t{1} << 24;
  std::size_t dense_eigen_order = 1024;
  std::size_t dense_solve_order = 4096;
};

/// a*b, throwing kDimensionOverflow on wrap-around or when above `cap`.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b,
                          std::uint64_t cap = UINT64_MAX);
/// base^exp with the same overflow contract as checked_mul.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp,
                          std::uint64_t cap = UINT64_MAX);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero matrix.
  DenseMatrix(std::size_t rows, std::size_t cols, const Limits& limits = {});
  /// Takes row-major entries; rejects non-finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }
  static DenseMatrix diagonal(std::span<const Complex> values);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  /// Bounds-checked access.
  const Complex& at(std::size_t r, std::size_t c) const;

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

struct Triple {
  std::size_t row;
  std::size_t col;
  Complex value;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Coordinate-list matrix kept in canonical form: triples sorted by
/// (row, col), duplicates summed, exact zeros dropped. No epsilon pruning.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols,
               std::vector<Triple> triples = {}, const Limits& limits = {});

  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return triples_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::span<const Triple> triples() const noexcept { return triples_; }

  /// Stored value at (r, c), or zero. O(log nnz).
  Complex at(std::size_t r, std::size_t c) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triple> triples_;
};

// Kronecker products. Entry (i*p + h, j*q + k) of kron(a, b) is a(i,j)*b(h,k).
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b,
                 const Limits& limits = {});
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b,
                  const Limits& limits = {});
/// k-fold power; k == 0 gives the 1x1 matrix [1].
DenseMatrix kron_power(const DenseMatrix& a, std::size_t k,
                       const Limits& limits = {});
SparseMatrix kron_power(const SparseMatrix& a, std::size_t k,
                        const Limits& limits = {});

/// Column stacking: the result is (rows*cols) x 1 and entry j*rows + i holds
/// m(i, j).
DenseMatrix vec(const DenseMatrix& m);
/// Inverse of vec for a column vector of length rows*cols.
DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols);

struct CanonicalBasis {
  enum class Kind { kProjector, kUnit, kCyclicShift, kUniform, kIdentity };

  Kind kind = Kind::kIdentity;
  std::size_t order = 0;
  std::size_t i = 0;
  std::size_t j = 0;

  /// C_i: single 1 at (i, i), 1 <= i <= n.
  static CanonicalBasis projector(std::size_t n, std::size_t i) {
    return {Kind::kProjector, n, i, 0};
  }
  /// E_ij: single 1 at (i, j), 1-based.
  static CanonicalBasis unit(std::size_t n, std::size_t i, std::size_t j) {
    return {Kind::kUnit, n, i, j};
  }
  /// Circ_i: entry (h, k) is 1 iff k - h = i mod m, 0 <= i < m.
  static CanonicalBasis cyclic_shift(std::size_t m, std::size_t i) {
    return {Kind::kCyclicShift, m, i, 0};
  }
  static CanonicalBasis uniform(std::size_t m) {
    return {Kind::kUniform, m, 0, 0};
  }
  static CanonicalBasis identity(std::size_t n) {
    return {Kind::kIdentity, n, 0, 0};
  }
};

DenseMatrix basis_matrix(const CanonicalBasis& spec);

// Arithmetic. Every binary operation checks conformability and throws
// kDimensionMismatch.
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, Complex s);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix conj_transpose(const DenseMatrix& a);
Complex trace(const DenseMatrix& a);

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix scale(const SparseMatrix& a, Complex s);
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);
SparseMatrix transpose(const SparseMatrix& a);
SparseMatrix conj_transpose(const SparseMatrix& a);
Complex trace(const SparseMatrix& a);

DenseMatrix to_dense(const SparseMatrix& a, const Limits& limits = {});
SparseMatrix to_sparse(const DenseMatrix& a);

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  return add(a, b);
}
inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  return subtract(a, b);
}
inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(a, b);
}
inline DenseMatrix operator*(Complex s, const DenseMatrix& a) {
  return scale(a, s);
}
inline SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  return add(a, b);
}
inline SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  return subtract(a, b);
}
inline SparseMatrix operator*(Complex s, const SparseMatrix& a) {
  return scale(a, s);
}

// Norms and comparisons used by predicates and tests.
double frobenius_norm(const DenseMatrix& a);
double frobenius_norm(const SparseMatrix& a);
/// Largest |a(i,j) - b(i,j)|; throws kDimensionMismatch on shape mismatch.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b);
bool is_diagonal(const DenseMatrix& a, double tol = 0.0);

}  // namespace wreath

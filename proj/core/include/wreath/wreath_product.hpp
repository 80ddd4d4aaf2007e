#pragma once

// Wreath product of square matrices and its block anatomy.
//
// For A of order n and B of order m,
//
//   A wr B = I_m^{(x)n} (x) A + sum_i I_m^{(x)(i-1)} (x) B (x) I_m^{(x)(n-i)} (x) C_i
//
// is a square matrix of order n*m^n. Viewed as an m^n x m^n grid of order-n
// blocks, block row p corresponds to the base-m digit tuple (f_1, ..., f_n)
// with p = 1 + sum_h f_h m^(n-h); f_1 is the most significant digit.
//
// Block coordinates and WreathIndex::p are 1-based. Digits are 0-based.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/tensor.hpp"

namespace wreath {

inline constexpr double kDefaultPredicateTol = 1e-10;

/// Order n*m^n of A wr B, overflow-checked against `cap`.
std::uint64_t wreath_order(std::size_t n, std::size_t m,
                           std::uint64_t cap = UINT64_MAX);

/// Sparse A wr B, emitted directly from block index arithmetic.
SparseMatrix wreath_product(const DenseMatrix& a, const DenseMatrix& b,
                            const Limits& limits = {});

/// m^(n-1) * (m tr(a) + n tr(b)), without building anything.
Complex wreath_trace(const DenseMatrix& a, const DenseMatrix& b);

struct WreathIndex {
  std::size_t p = 1;
  std::vector<std::size_t> digits;

  static WreathIndex from_flat(std::size_t n, std::size_t m, std::size_t p);
  static WreathIndex from_digits(std::size_t m, std::vector<std::size_t> digits);

  friend bool operator==(const WreathIndex&, const WreathIndex&) = default;
};

struct BlockDescriptor {
  enum class Kind { kZero, kOffDiagonal, kDiagonal };

  Kind kind = Kind::kZero;
  std::size_t block_row = 1;
  std::size_t block_col = 1;
  // Off-diagonal blocks are b_ij * C_k (all 1-based).
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  // Diagonal blocks carry the digit tuple of their WreathIndex.
  std::vector<std::size_t> digits;
  // b_ij for off-diagonal blocks, when B was supplied.
  std::optional<Complex> coefficient;
};

/// Classifies the order-n block at 1-based block coordinates. Pure index
/// arithmetic; `b` is only consulted to fill in the coefficient.
BlockDescriptor block_at(std::size_t n, std::size_t m, std::size_t block_row,
                         std::size_t block_col,
                         const DenseMatrix* b = nullptr);

/// Positions where b_ij C_k sits, from the closed-form position formulas
/// (separate branches for k = 1, 1 < k < n and k = n). 1-based, i != j.
std::vector<std::pair<std::size_t, std::size_t>> offdiagonal_block_positions(
    std::size_t n, std::size_t m, std::size_t i, std::size_t j, std::size_t k);

/// A + sum_h b_{f_h+1, f_h+1} C_h for the diagonal block at `index`.
DenseMatrix diagonal_block(const WreathIndex& index, const DenseMatrix& a,
                           const DenseMatrix& b);

/// Dense order-n block at 1-based block coordinates of a materialized
/// product.
DenseMatrix extract_block(const SparseMatrix& product, std::size_t n,
                          std::size_t block_row, std::size_t block_col);

nlohmann::json to_json(const BlockDescriptor& d);

/// The linear map F(A, B) = A wr B.
inline SparseMatrix f_map(const DenseMatrix& a, const DenseMatrix& b,
                          const Limits& limits = {}) {
  return wreath_product(a, b, limits);
}

/// True iff a = h I_n and b = -h I_m for one scalar h, entrywise within tol.
bool f_kernel_member(const DenseMatrix& a, const DenseMatrix& b,
                     double tol = kDefaultPredicateTol);

/// True iff a wr b = b wr a, i.e. equal orders and a - b = h I within tol.
/// Both orders must exceed 1.
bool wreath_commute(const DenseMatrix& a, const DenseMatrix& b,
                    double tol = kDefaultPredicateTol);

/// The element a + h I of the centralizer of a.
DenseMatrix centralizer_element(const DenseMatrix& a, Complex h);

}  // namespace wreath

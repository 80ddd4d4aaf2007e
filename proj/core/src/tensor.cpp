#include "wreath/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wreath {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionOverflow: return "dimension-overflow";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kEnumerationOverflow: return "enumeration-overflow";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kNonRegular: return "non-regular";
    case ErrorKind::kSingularCoefficient: return "singular-coefficient";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kUnsupported: return "unsupported";
  }
  return "unknown";
}

namespace {

[[noreturn]] void mismatch(const char* op, std::size_t r1, std::size_t c1,
                           std::size_t r2, std::size_t c2) {
  throw Error(ErrorKind::kDimensionMismatch,
              std::string(op) + ": " + std::to_string(r1) + "x" +
                  std::to_string(c1) + " vs " + std::to_string(r2) + "x" +
                  std::to_string(c2));
}

void require_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::kInvalidArgument, "non-finite matrix entry");
  }
}

void check_dense_size(std::size_t rows, std::size_t cols, const Limits& limits) {
  checked_mul(rows, cols, limits.dense_entries);
}

void check_sparse_order(std::size_t rows, std::size_t cols,
                        const Limits& limits) {
  if (rows > limits.sparse_order || cols > limits.sparse_order) {
    throw Error(ErrorKind::kDimensionOverflow,
                "sparse order " + std::to_string(std::max(rows, cols)) +
                    " exceeds cap " + std::to_string(limits.sparse_order));
  }
}

}  // namespace

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out) || out > cap) {
    throw Error(ErrorKind::kDimensionOverflow,
                "size " + std::to_string(a) + "*" + std::to_string(b) +
                    " exceeds cap " + std::to_string(cap));
  }
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp,
                          std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint64_t e = 0; e < exp; ++e) out = checked_mul(out, base, cap);
  return out;
}

// ---------------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         const Limits& limits)
    : rows_(rows), cols_(cols) {
  check_dense_size(rows, cols, limits);
  entries_.assign(rows * cols, Complex{});
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != checked_mul(rows, cols)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "entry count " + std::to_string(entries_.size()) +
                    " does not match " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  for (const Complex& z : entries_) require_finite(z);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> values) {
  DenseMatrix out(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_finite(values[i]);
    out(i, i) = values[i];
  }
  return out;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw Error(ErrorKind::kDimensionMismatch, "ragged row list");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(entries));
}

const Complex& DenseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "(" + std::to_string(r) + "," + std::to_string(c) +
                    ") outside " + std::to_string(rows_) + "x" +
                    std::to_string(cols_));
  }
  return (*this)(r, c);
}

// --------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<Triple> triples, const Limits& limits)
    : rows_(rows), cols_(cols) {
  check_sparse_order(rows, cols, limits);
  for (const Triple& t : triples) {
    if (t.row >= rows || t.col >= cols) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "triple (" + std::to_string(t.row) + "," +
                      std::to_string(t.col) + ") outside " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    require_finite(t.value);
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  triples_.reserve(triples.size());
  for (std::size_t k = 0; k < triples.size();) {
    Triple merged = triples[k++];
    while (k < triples.size() && triples[k].row == merged.row &&
           triples[k].col == merged.col) {
      merged.value += triples[k++].value;
    }
    if (merged.value != Complex{}) triples_.push_back(merged);
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triple> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(t));
}

Complex SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto it = std::lower_bound(
      triples_.begin(), triples_.end(), std::pair{r, c},
      [](const Triple& t, const std::pair<std::size_t, std::size_t>& key) {
        return t.row != key.first ? t.row < key.first : t.col < key.second;
      });
  if (it != triples_.end() && it->row == r && it->col == c) return it->value;
  return {};
}

// ------------------------------------------------------------------ Kronecker

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b,
                 const Limits& limits) {
  const std::size_t rows = checked_mul(a.rows(), b.rows());
  const std::size_t cols = checked_mul(a.cols(), b.cols());
  DenseMatrix out(rows, cols, limits);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex s = a(i, j);
      if (s == Complex{}) continue;
      for (std::size_t h = 0; h < b.rows(); ++h) {
        for (std::size_t k = 0; k < b.cols(); ++k) {
          out(i * b.rows() + h, j * b.cols() + k) = s * b(h, k);
        }
      }
    }
  }
  return out;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b,
                  const Limits& limits) {
  const std::size_t rows = checked_mul(a.rows(), b.rows());
  const std::size_t cols = checked_mul(a.cols(), b.cols());
  check_sparse_order(rows, cols, limits);
  std::vector<Triple> t;
  t.reserve(a.nnz() * b.nnz());
  for (const Triple& x : a.triples()) {
    for (const Triple& y : b.triples()) {
      t.push_back({x.row * b.rows() + y.row, x.col * b.cols() + y.col,
                   x.value * y.value});
    }
  }
  return SparseMatrix(rows, cols, std::move(t), limits);
}

DenseMatrix kron_power(const DenseMatrix& a, std::size_t k,
                       const Limits& limits) {
  DenseMatrix out = DenseMatrix::identity(1);
  for (std::size_t i = 0; i < k; ++i) out = kron(out, a, limits);
  return out;
}

SparseMatrix kron_power(const SparseMatrix& a, std::size_t k,
                        const Limits& limits) {
  SparseMatrix out = SparseMatrix::identity(1);
  for (std::size_t i = 0; i < k; ++i) out = kron(out, a, limits);
  return out;
}

// ------------------------------------------------------------------------ vec

DenseMatrix vec(const DenseMatrix& m) {
  DenseMatrix out(m.rows() * m.cols(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      out(j * m.rows() + i, 0) = m(i, j);
    }
  }
  return out;
}

DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) {
    mismatch("unvec", v.rows(), v.cols(), rows * cols, 1);
  }
  DenseMatrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = v(j * rows + i, 0);
  }
  return out;
}

// ---------------------------------------------------------------- basis

DenseMatrix basis_matrix(const CanonicalBasis& spec) {
  const std::size_t n = spec.order;
  auto out_of_range = [&](const char* what) {
    throw Error(ErrorKind::kIndexOutOfRange,
                std::string(what) + " index outside order " +
                    std::to_string(n));
  };
  DenseMatrix out(n, n);
  switch (spec.kind) {
    case CanonicalBasis::Kind::kProjector:
      if (spec.i < 1 || spec.i > n) out_of_range("projector");
      out(spec.i - 1, spec.i - 1) = 1.0;
      break;
    case CanonicalBasis::Kind::kUnit:
      if (spec.i < 1 || spec.i > n || spec.j < 1 || spec.j > n) {
        out_of_range("unit");
      }
      out(spec.i - 1, spec.j - 1) = 1.0;
      break;
    case CanonicalBasis::Kind::kCyclicShift:
      if (spec.i >= n) out_of_range("cyclic shift");
      for (std::size_t h = 0; h < n; ++h) out(h, (h + spec.i) % n) = 1.0;
      break;
    case CanonicalBasis::Kind::kUniform:
      for (Complex& z : out.entries()) z = 1.0;
      break;
    case CanonicalBasis::Kind::kIdentity:
      for (std::size_t h = 0; h < n; ++h) out(h, h) = 1.0;
      break;
  }
  return out;
}

// ----------------------------------------------------------- dense arithmetic

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    mismatch("add", a.rows(), a.cols(), b.rows(), b.cols());
  }
  DenseMatrix out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.entries()[k] += b.entries()[k];
  return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    mismatch("subtract", a.rows(), a.cols(), b.rows(), b.cols());
  }
  DenseMatrix out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.entries()[k] -= b.entries()[k];
  return out;
}

DenseMatrix scale(const DenseMatrix& a, Complex s) {
  DenseMatrix out = a;
  for (Complex& z : out.entries()) z *= s;
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    mismatch("multiply", a.rows(), a.cols(), b.rows(), b.cols());
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex s = a(i, l);
      if (s == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += s * b(l, j);
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

DenseMatrix conj_transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

Complex trace(const DenseMatrix& a) {
  if (!a.is_square()) mismatch("trace", a.rows(), a.cols(), a.cols(), a.rows());
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// ---------------------------------------------------------- sparse arithmetic

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    mismatch("add", a.rows(), a.cols(), b.rows(), b.cols());
  }
  std::vector<Triple> t(a.triples().begin(), a.triples().end());
  t.insert(t.end(), b.triples().begin(), b.triples().end());
  return SparseMatrix(a.rows(), a.cols(), std::move(t));
}

SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b) {
  return add(a, scale(b, -1.0));
}

SparseMatrix scale(const SparseMatrix& a, Complex s) {
  std::vector<Triple> t(a.triples().begin(), a.triples().end());
  for (Triple& x : t) x.value *= s;
  return SparseMatrix(a.rows(), a.cols(), std::move(t));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) {
    mismatch("multiply", a.rows(), a.cols(), b.rows(), b.cols());
  }
  // Row offsets into b's canonical (row-sorted) triples.
  std::vector<std::size_t> start(b.rows() + 1, 0);
  for (const Triple& y : b.triples()) ++start[y.row + 1];
  for (std::size_t r = 0; r < b.rows(); ++r) start[r + 1] += start[r];
  const auto bt = b.triples();
  std::vector<Triple> t;
  for (const Triple& x : a.triples()) {
    for (std::size_t k = start[x.col]; k < start[x.col + 1]; ++k) {
      t.push_back({x.row, bt[k].col, x.value * bt[k].value});
    }
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(t));
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    mismatch("multiply", a.rows(), a.cols(), b.rows(), b.cols());
  }
  DenseMatrix out(a.rows(), b.cols());
  for (const Triple& x : a.triples()) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(x.row, j) += x.value * b(x.col, j);
  }
  return out;
}

SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<Triple> t;
  t.reserve(a.nnz());
  for (const Triple& x : a.triples()) t.push_back({x.col, x.row, x.value});
  return SparseMatrix(a.cols(), a.rows(), std::move(t));
}

SparseMatrix conj_transpose(const SparseMatrix& a) {
  std::vector<Triple> t;
  t.reserve(a.nnz());
  for (const Triple& x : a.triples()) {
    t.push_back({x.col, x.row, std::conj(x.value)});
  }
  return SparseMatrix(a.cols(), a.rows(), std::move(t));
}

Complex trace(const SparseMatrix& a) {
  if (!a.is_square()) mismatch("trace", a.rows(), a.cols(), a.cols(), a.rows());
  Complex t{};
  for (const Triple& x : a.triples()) {
    if (x.row == x.col) t += x.value;
  }
  return t;
}

DenseMatrix to_dense(const SparseMatrix& a, const Limits& limits) {
  DenseMatrix out(a.rows(), a.cols(), limits);
  for (const Triple& x : a.triples()) out(x.row, x.col) = x.value;
  return out;
}

SparseMatrix to_sparse(const DenseMatrix& a) {
  std::vector<Triple> t;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != Complex{}) t.push_back({i, j, a(i, j)});
    }
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(t));
}

// ---------------------------------------------------------------- comparisons

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double frobenius_norm(const SparseMatrix& a) {
  double s = 0.0;
  for (const Triple& x : a.triples()) s += std::norm(x.value);
  return std::sqrt(s);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    mismatch("max_abs_diff", a.rows(), a.cols(), b.rows(), b.cols());
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return d;
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  const SparseMatrix d = subtract(a, b);
  double out = 0.0;
  for (const Triple& x : d.triples()) out = std::max(out, std::abs(x.value));
  return out;
}

bool is_diagonal(const DenseMatrix& a, double tol) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j && std::abs(a(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace wreath

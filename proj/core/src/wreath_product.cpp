#include "wreath/wreath_product.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wreath {

namespace {

void require_square(const DenseMatrix& x, const char* name) {
  if (!x.is_square() || x.rows() == 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(name) + " must be square and nonempty, got " +
                    std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
}

std::vector<std::size_t> digits_of(std::size_t flat, std::size_t n,
                                   std::size_t m) {
  std::vector<std::size_t> d(n, 0);
  for (std::size_t h = n; h-- > 0;) {
    d[h] = flat % m;
    flat /= m;
  }
  return d;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t e = 0; e < exp; ++e) out *= base;
  return out;
}

Complex diag_sum(const DenseMatrix& x) {
  Complex s{};
  for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, i);
  return s;
}

bool is_scalar_multiple_of_identity(const DenseMatrix& x, Complex h,
                                    double tol) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const Complex expect = i == j ? h : Complex{};
      if (std::abs(x(i, j) - expect) > tol) return false;
    }
  }
  return true;
}

}  // namespace

std::uint64_t wreath_order(std::size_t n, std::size_t m, std::uint64_t cap) {
  return checked_mul(n, checked_pow(m, n, cap), cap);
}

SparseMatrix wreath_product(const DenseMatrix& a, const DenseMatrix& b,
                            const Limits& limits) {
  require_square(a, "A");
  require_square(b, "B");
  const std::size_t n = a.rows();
  const std::size_t m = b.rows();

  // (a) wr B = B + a I_m and A wr (b) = A + b I_n.
  if (n == 1) {
    return to_sparse(add(b, scale(DenseMatrix::identity(m), a(0, 0))));
  }
  if (m == 1) {
    return to_sparse(add(a, scale(DenseMatrix::identity(n), b(0, 0))));
  }

  const std::size_t order = wreath_order(n, m, limits.sparse_order);
  const std::size_t blocks = order / n;

  std::size_t a_nnz = 0;
  for (const Complex& z : a.entries()) a_nnz += z != Complex{};
  std::size_t b_nnz = 0;
  for (const Complex& z : b.entries()) b_nnz += z != Complex{};

  std::vector<std::size_t> weight(n);
  for (std::size_t h = 0; h < n; ++h) weight[h] = ipow(m, n - 1 - h);

  std::vector<Triple> triples;
  triples.reserve(blocks * (a_nnz + n * b_nnz));
  std::vector<std::size_t> f(n, 0);
  for (std::size_t p = 0; p < blocks; ++p) {
    const std::size_t base = p * n;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (a(r, c) != Complex{}) triples.push_back({base + r, base + c, a(r, c)});
      }
    }
    // Summand h touches only row/col h of each block and moves digit f_h.
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t g = 0; g < m; ++g) {
        const Complex v = b(f[h], g);
        if (v == Complex{}) continue;
        const std::size_t q = p - f[h] * weight[h] + g * weight[h];
        triples.push_back({base + h, q * n + h, v});
      }
    }
    // Advance the mixed-radix counter.
    for (std::size_t h = n; h-- > 0;) {
      if (++f[h] < m) break;
      f[h] = 0;
    }
  }
  return SparseMatrix(order, order, std::move(triples), limits);
}

Complex wreath_trace(const DenseMatrix& a, const DenseMatrix& b) {
  require_square(a, "A");
  require_square(b, "B");
  const double n = static_cast<double>(a.rows());
  const double m = static_cast<double>(b.rows());
  return std::pow(m, n - 1.0) * (m * trace(a) + n * trace(b));
}

WreathIndex WreathIndex::from_flat(std::size_t n, std::size_t m, std::size_t p) {
  const std::uint64_t count = checked_pow(m, n);
  if (p < 1 || p > count) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "block index " + std::to_string(p) + " outside 1.." +
                    std::to_string(count));
  }
  return {p, digits_of(p - 1, n, m)};
}

WreathIndex WreathIndex::from_digits(std::size_t m,
                                     std::vector<std::size_t> digits) {
  std::size_t flat = 0;
  for (std::size_t d : digits) {
    if (d >= m) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "digit " + std::to_string(d) + " outside 0.." +
                      std::to_string(m - 1));
    }
    flat = flat * m + d;
  }
  return {flat + 1, std::move(digits)};
}

BlockDescriptor block_at(std::size_t n, std::size_t m, std::size_t block_row,
                         std::size_t block_col, const DenseMatrix* b) {
  const std::uint64_t count = checked_pow(m, n);
  if (block_row < 1 || block_row > count || block_col < 1 || block_col > count) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "block (" + std::to_string(block_row) + "," +
                    std::to_string(block_col) + ") outside 1.." +
                    std::to_string(count));
  }
  if (b != nullptr && (b->rows() != m || b->cols() != m)) {
    throw Error(ErrorKind::kDimensionMismatch, "B does not have order m");
  }
  BlockDescriptor d;
  d.block_row = block_row;
  d.block_col = block_col;
  const auto f = digits_of(block_row - 1, n, m);
  const auto g = digits_of(block_col - 1, n, m);

  std::size_t differing = 0;
  std::size_t where = 0;
  for (std::size_t h = 0; h < n; ++h) {
    if (f[h] != g[h]) {
      ++differing;
      where = h;
    }
  }
  if (differing == 0) {
    d.kind = BlockDescriptor::Kind::kDiagonal;
    d.digits = f;
  } else if (differing == 1) {
    d.kind = BlockDescriptor::Kind::kOffDiagonal;
    d.i = f[where] + 1;
    d.j = g[where] + 1;
    d.k = where + 1;
    if (b != nullptr) d.coefficient = (*b)(d.i - 1, d.j - 1);
  }
  return d;
}

std::vector<std::pair<std::size_t, std::size_t>> offdiagonal_block_positions(
    std::size_t n, std::size_t m, std::size_t i, std::size_t j, std::size_t k) {
  if (n < 1 || m < 2 || i < 1 || i > m || j < 1 || j > m || i == j || k < 1 ||
      k > n) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "need 1 <= i != j <= m and 1 <= k <= n");
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (k == 1) {
    const std::size_t span = ipow(m, n - 1);
    for (std::size_t s = 1; s <= span; ++s) {
      out.emplace_back((i - 1) * span + s, (j - 1) * span + s);
    }
  } else if (k == n) {
    for (std::size_t t = 0; t < ipow(m, n - 1); ++t) {
      out.emplace_back(i + t * m, j + t * m);
    }
  } else {
    const std::size_t inner = ipow(m, n - k);
    const std::size_t stride = inner * m;
    for (std::size_t t = 0; t < ipow(m, k - 1); ++t) {
      for (std::size_t s = 1; s <= inner; ++s) {
        out.emplace_back((i - 1) * inner + s + t * stride,
                         (j - 1) * inner + s + t * stride);
      }
    }
  }
  return out;
}

DenseMatrix diagonal_block(const WreathIndex& index, const DenseMatrix& a,
                           const DenseMatrix& b) {
  require_square(a, "A");
  require_square(b, "B");
  if (index.digits.size() != a.rows()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "digit tuple length must equal the order of A");
  }
  DenseMatrix out = a;
  for (std::size_t h = 0; h < index.digits.size(); ++h) {
    const std::size_t f = index.digits[h];
    if (f >= b.rows()) {
      throw Error(ErrorKind::kIndexOutOfRange, "digit outside order of B");
    }
    out(h, h) += b(f, f);
  }
  return out;
}

DenseMatrix extract_block(const SparseMatrix& product, std::size_t n,
                          std::size_t block_row, std::size_t block_col) {
  const std::size_t r0 = (block_row - 1) * n;
  const std::size_t c0 = (block_col - 1) * n;
  if (block_row < 1 || block_col < 1 || r0 + n > product.rows() ||
      c0 + n > product.cols()) {
    throw Error(ErrorKind::kIndexOutOfRange, "block outside product");
  }
  DenseMatrix out(n, n);
  const auto t = product.triples();
  auto it = std::lower_bound(t.begin(), t.end(), r0,
                             [](const Triple& x, std::size_t r) { return x.row < r; });
  for (; it != t.end() && it->row < r0 + n; ++it) {
    if (it->col >= c0 && it->col < c0 + n) out(it->row - r0, it->col - c0) = it->value;
  }
  return out;
}

nlohmann::json to_json(const BlockDescriptor& d) {
  nlohmann::json j;
  j["block_row"] = d.block_row;
  j["block_col"] = d.block_col;
  switch (d.kind) {
    case BlockDescriptor::Kind::kZero:
      j["kind"] = "zero";
      j["params"] = nlohmann::json::object();
      break;
    case BlockDescriptor::Kind::kOffDiagonal:
      j["kind"] = "off-diagonal";
      j["params"] = {{"i", d.i}, {"j", d.j}, {"k", d.k}};
      if (d.coefficient) {
        j["params"]["b_ij"] = {d.coefficient->real(), d.coefficient->imag()};
      }
      break;
    case BlockDescriptor::Kind::kDiagonal:
      j["kind"] = "diagonal";
      j["params"] = {{"digits", d.digits}};
      break;
  }
  return j;
}

bool f_kernel_member(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  require_square(a, "A");
  require_square(b, "B");
  const double count = static_cast<double>(a.rows() + b.rows());
  const Complex h = (diag_sum(a) - diag_sum(b)) / count;
  return is_scalar_multiple_of_identity(a, h, tol) &&
         is_scalar_multiple_of_identity(b, -h, tol);
}

bool wreath_commute(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() <= 1 || b.rows() <= 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "commutativity criterion needs both orders > 1");
  }
  if (a.rows() != b.rows()) return false;
  const DenseMatrix d = subtract(a, b);
  const Complex h = diag_sum(d) / static_cast<double>(d.rows());
  return is_scalar_multiple_of_identity(d, h, tol);
}

DenseMatrix centralizer_element(const DenseMatrix& a, Complex h) {
  require_square(a, "A");
  return add(a, scale(DenseMatrix::identity(a.rows()), h));
}

}  // namespace wreath

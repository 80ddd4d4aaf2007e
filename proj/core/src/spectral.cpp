#include "wreath/spectral.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "wreath/eigensolver.hpp"

namespace wreath {

namespace {

Eigen::MatrixXcd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    }
  }
  return out;
}

std::uint64_t tuple_count(std::size_t n, std::size_t m, const Limits& limits) {
  try {
    return checked_pow(m, n, limits.enumeration);
  } catch (const Error&) {
    throw Error(ErrorKind::kEnumerationOverflow,
                std::to_string(m) + "^" + std::to_string(n) +
                    " tuples exceed the enumeration cap " +
                    std::to_string(limits.enumeration));
  }
}

void require_block_inputs(const DenseMatrix& a, const CirculantSpec& spec) {
  if (!a.is_square() || a.rows() == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "A must be square and nonempty");
  }
  if (spec.order() == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "circulant order must be >= 1");
  }
}

void decode_tuple(std::uint64_t flat, std::size_t m, std::vector<std::size_t>& t) {
  for (std::size_t h = t.size(); h-- > 0;) {
    t[h] = static_cast<std::size_t>(flat % m);
    flat /= m;
  }
}

void advance_tuple(std::size_t m, std::vector<std::size_t>& t) {
  for (std::size_t h = t.size(); h-- > 0;) {
    if (++t[h] < m) return;
    t[h] = 0;
  }
}

}  // namespace

DenseMatrix CirculantSpec::to_matrix() const {
  const std::size_t m = order();
  DenseMatrix out(m, m);
  for (std::size_t h = 0; h < m; ++h) {
    for (std::size_t k = 0; k < m; ++k) out(h, k) = coefficients[(k + m - h) % m];
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> circulant_violation(
    const DenseMatrix& b, double tol) {
  if (!b.is_square()) {
    throw Error(ErrorKind::kDimensionMismatch, "B must be square");
  }
  const std::size_t m = b.rows();
  for (std::size_t h = 0; h < m; ++h) {
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs(b(h, k) - b(0, (k + m - h) % m)) > tol) return std::pair{h, k};
    }
  }
  return std::nullopt;
}

std::optional<CirculantSpec> is_circulant(const DenseMatrix& b, double tol) {
  if (circulant_violation(b, tol)) return std::nullopt;
  CirculantSpec spec;
  spec.coefficients.assign(b.entries().begin(), b.entries().begin() + b.cols());
  return spec;
}

Complex root_of_unity(std::size_t k, std::size_t m) {
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(k % m) / static_cast<double>(m);
  return std::polar(1.0, angle);
}

Complex circulant_symbol(const CirculantSpec& spec, std::size_t i_t) {
  const std::size_t m = spec.order();
  if (i_t >= m) {
    throw Error(ErrorKind::kIndexOutOfRange, "symbol index outside 0..m-1");
  }
  Complex s{};
  for (std::size_t i = 0; i < m; ++i) {
    s += spec.coefficients[i] * root_of_unity((i * i_t) % m, m);
  }
  return s;
}

std::vector<Complex> circulant_symbols(const CirculantSpec& spec) {
  std::vector<Complex> out(spec.order());
  for (std::size_t j = 0; j < spec.order(); ++j) out[j] = circulant_symbol(spec, j);
  return out;
}

ReducedBlock reduced_block(const DenseMatrix& a, const CirculantSpec& spec,
                           std::vector<std::size_t> tuple) {
  require_block_inputs(a, spec);
  if (tuple.size() != a.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "tuple length must equal order of A");
  }
  DenseMatrix block = a;
  for (std::size_t t = 0; t < tuple.size(); ++t) {
    block(t, t) += circulant_symbol(spec, tuple[t]);
  }
  return {std::move(tuple), std::move(block)};
}

void for_each_reduced_block(const DenseMatrix& a, const CirculantSpec& spec,
                            const std::function<void(const ReducedBlock&)>& visit,
                            const Limits& limits) {
  require_block_inputs(a, spec);
  const std::size_t n = a.rows();
  const std::size_t m = spec.order();
  const std::uint64_t count = tuple_count(n, m, limits);
  const auto symbols = circulant_symbols(spec);
  ReducedBlock block{std::vector<std::size_t>(n, 0), a};
  for (std::uint64_t p = 0; p < count; ++p) {
    for (std::size_t t = 0; t < n; ++t) block.matrix(t, t) = a(t, t) + symbols[block.tuple[t]];
    visit(block);
    advance_tuple(m, block.tuple);
  }
}

std::vector<ReducedBlock> reduced_blocks(const DenseMatrix& a,
                                         const CirculantSpec& spec,
                                         const Limits& limits) {
  std::vector<ReducedBlock> out;
  for_each_reduced_block(a, spec, [&](const ReducedBlock& b) { out.push_back(b); },
                         limits);
  return out;
}

std::vector<Complex> spectrum_reduced_values(const DenseMatrix& a,
                                             const CirculantSpec& spec,
                                             const SpectrumOptions& options) {
  require_block_inputs(a, spec);
  const std::size_t n = a.rows();
  const std::size_t m = spec.order();
  const std::uint64_t count = tuple_count(n, m, options.limits);
  const auto symbols = circulant_symbols(spec);
  std::vector<Complex> values(count * n);

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::size_t> tuple(n, 0);
    decode_tuple(begin, m, tuple);
    DenseMatrix block = a;
    for (std::uint64_t p = begin; p < end; ++p) {
      for (std::size_t t = 0; t < n; ++t) block(t, t) = a(t, t) + symbols[tuple[t]];
      const auto eig = block_eigenvalues(block);
      std::copy(eig.begin(), eig.end(), values.begin() + static_cast<std::ptrdiff_t>(p * n));
      advance_tuple(m, tuple);
    }
  };

  std::size_t threads = options.threads == 0
                            ? std::max(1u, std::thread::hardware_concurrency())
                            : options.threads;
  threads = static_cast<std::size_t>(std::min<std::uint64_t>(threads, count));
  if (threads <= 1) {
    work(0, count);
    return values;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(threads);
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) work(begin, end);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return values;
}

EigenMultiset spectrum_reduced(const DenseMatrix& a, const CirculantSpec& spec,
                               const SpectrumOptions& options) {
  const auto values = spectrum_reduced_values(a, spec, options);
  return EigenMultiset::from_values(values, options.tol);
}

std::pair<Complex, Complex> closed_form_2x2_pair(const DenseMatrix& a,
                                                 const CirculantSpec& spec,
                                                 std::size_t i1, std::size_t i2) {
  if (a.rows() != 2 || a.cols() != 2) {
    throw Error(ErrorKind::kDimensionMismatch, "closed form needs a 2x2 A");
  }
  const std::size_t m = spec.order();
  if (i1 >= m || i2 >= m) {
    throw Error(ErrorKind::kIndexOutOfRange, "tuple index outside 0..m-1");
  }
  Complex sum{};
  Complex gap{};
  for (std::size_t i = 0; i < m; ++i) {
    const Complex r1 = root_of_unity((i * i1) % m, m);
    const Complex r2 = root_of_unity((i * i2) % m, m);
    sum += spec.coefficients[i] * (r1 + r2);
    if (i >= 1) gap += spec.coefficients[i] * (r1 - r2);
  }
  const Complex mean = 0.5 * (sum + a(0, 0) + a(1, 1));
  const Complex d = gap + a(0, 0) - a(1, 1);
  const Complex root = 0.5 * std::sqrt(d * d + 4.0 * a(0, 1) * a(1, 0));
  return {mean + root, mean - root};
}

EigenMultiset spectrum_2x2_closed_form(const DenseMatrix& a,
                                       const CirculantSpec& spec, double tol) {
  std::vector<Complex> values;
  const std::size_t m = spec.order();
  values.reserve(2 * m * m);
  for (std::size_t i1 = 0; i1 < m; ++i1) {
    for (std::size_t i2 = 0; i2 < m; ++i2) {
      const auto [x, y] = closed_form_2x2_pair(a, spec, i1, i2);
      values.push_back(x);
      values.push_back(y);
    }
  }
  return EigenMultiset::from_values(values, tol);
}

Complex ipow(Complex base, std::uint64_t exp) {
  Complex out{1.0};
  while (exp > 0) {
    if (exp & 1u) out *= base;
    base *= base;
    exp >>= 1u;
  }
  return out;
}

EigenMultiset spectrum_diag_uniform(std::span<const Complex> diag, std::size_t m,
                                    Complex h, double tol) {
  if (diag.empty() || m == 0) {
    throw Error(ErrorKind::kInvalidArgument, "need n >= 1 and m >= 1");
  }
  const std::uint64_t outer = checked_pow(m, diag.size() - 1);
  std::vector<EigenEntry> entries;
  for (const Complex& ak : diag) {
    entries.push_back({ak + static_cast<double>(m) * h, outer});
    if (m > 1) entries.push_back({ak, (m - 1) * outer});
  }
  return EigenMultiset::from_entries(entries, tol);
}

Complex det_diag_uniform(std::span<const Complex> diag, std::size_t m, Complex h) {
  if (diag.empty() || m == 0) {
    throw Error(ErrorKind::kInvalidArgument, "need n >= 1 and m >= 1");
  }
  const std::uint64_t outer = checked_pow(m, diag.size() - 1);
  Complex det{1.0};
  for (const Complex& ak : diag) {
    det *= ipow(ak + static_cast<double>(m) * h, outer) * ipow(ak, (m - 1) * outer);
  }
  return det;
}

std::optional<SingularityWitness> diag_uniform_singularity(
    std::span<const Complex> diag, std::size_t m, Complex h, double tol) {
  for (std::size_t k = 0; k < diag.size(); ++k) {
    if (std::abs(diag[k]) <= tol) {
      return SingularityWitness{k + 1, SingularityWitness::Reason::kZeroEntry, diag[k]};
    }
    if (std::abs(diag[k] + static_cast<double>(m) * h) <= tol) {
      return SingularityWitness{k + 1, SingularityWitness::Reason::kMinusMH, diag[k]};
    }
  }
  return std::nullopt;
}

bool is_singular_diag_uniform(std::span<const Complex> diag, std::size_t m,
                              Complex h, double tol) {
  return diag_uniform_singularity(diag, m, h, tol).has_value();
}

std::vector<Complex> dense_eigenvalues(const DenseMatrix& m, const Limits& limits) {
  if (!m.is_square()) {
    throw Error(ErrorKind::kDimensionMismatch, "eigenvalues need a square matrix");
  }
  if (m.rows() > limits.dense_eigen_order) {
    throw Error(ErrorKind::kDimensionOverflow,
                "order " + std::to_string(m.rows()) + " exceeds dense cap " +
                    std::to_string(limits.dense_eigen_order));
  }
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNonConvergence, "dense eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

EigenMultiset dense_spectrum(const DenseMatrix& m, double tol, const Limits& limits) {
  const auto values = dense_eigenvalues(m, limits);
  return EigenMultiset::from_values(values, tol);
}

Complex dense_determinant(const DenseMatrix& m, const Limits& limits) {
  if (!m.is_square()) {
    throw Error(ErrorKind::kDimensionMismatch, "determinant needs a square matrix");
  }
  if (m.rows() > limits.dense_solve_order) {
    throw Error(ErrorKind::kDimensionOverflow,
                "order " + std::to_string(m.rows()) + " exceeds LU cap " +
                    std::to_string(limits.dense_solve_order));
  }
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(to_eigen(m)).determinant();
}

}  // namespace wreath

#include "wreath/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "wreath/matrix_io.hpp"
#include "wreath/wreath_product.hpp"

namespace wreath {

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

[[noreturn]] void mismatch(const std::string& msg) {
  throw Error(ErrorKind::kDimensionMismatch, msg);
}

std::string witness_text(const SingularityWitness& w) {
  std::string out = "a_" + std::to_string(w.k);
  out += w.reason == SingularityWitness::Reason::kZeroEntry ? " = 0" : " = -m h";
  return out;
}

}  // namespace

std::pair<std::size_t, std::size_t> SylvesterSystem::unknown_shape() const {
  if (pairs.empty()) return {0, 0};
  return {pairs.front().a.cols(), pairs.front().b.rows()};
}

void SylvesterSystem::validate() const {
  if (pairs.empty()) mismatch("a Sylvester system needs at least one pair");
  const SparseMatrix& a0 = pairs.front().a;
  const SparseMatrix& b0 = pairs.front().b;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.a.rows() != a0.rows() || p.a.cols() != a0.cols()) {
      mismatch("A_" + std::to_string(i + 1) + " is " + shape(p.a.rows(), p.a.cols()) +
               ", A_1 is " + shape(a0.rows(), a0.cols()));
    }
    if (p.b.rows() != b0.rows() || p.b.cols() != b0.cols()) {
      mismatch("B_" + std::to_string(i + 1) + " is " + shape(p.b.rows(), p.b.cols()) +
               ", B_1 is " + shape(b0.rows(), b0.cols()));
    }
  }
  if (rhs.rows() != a0.rows() || rhs.cols() != b0.cols()) {
    mismatch("C is " + shape(rhs.rows(), rhs.cols()) + ", expected " +
             shape(a0.rows(), b0.cols()));
  }
}

SparseMatrix assemble_coefficient(const SylvesterSystem& sys, const Limits& limits) {
  sys.validate();
  const std::size_t n = sys.pairs.front().a.rows();
  const std::size_t t = sys.pairs.front().b.cols();
  const std::size_t m = sys.pairs.front().a.cols();
  const std::size_t s = sys.pairs.front().b.rows();
  SparseMatrix out(checked_mul(n, t, limits.sparse_order),
                   checked_mul(m, s, limits.sparse_order));
  for (const CoefficientPair& p : sys.pairs) {
    out = add(out, kron(transpose(p.b), p.a, limits));
  }
  return out;
}

DenseMatrix apply_operator(const SylvesterSystem& sys, const DenseMatrix& x) {
  sys.validate();
  const auto [m, s] = sys.unknown_shape();
  if (x.rows() != m || x.cols() != s) {
    mismatch("X is " + shape(x.rows(), x.cols()) + ", expected " + shape(m, s));
  }
  DenseMatrix out(sys.rhs.rows(), sys.rhs.cols());
  for (const CoefficientPair& p : sys.pairs) {
    const DenseMatrix ax = multiply(p.a, x);
    // (A X) B = (B^T (A X)^T)^T keeps the sparse factor on the left.
    out = add(out, transpose(multiply(transpose(p.b), transpose(ax))));
  }
  return out;
}

SylvesterSystem expand_wreath_system(const WreathSylvesterSpec& spec,
                                     const Limits& limits) {
  const std::size_t n = spec.a.rows();
  const std::size_t m = spec.b.rows();
  if (!spec.a.is_square() || n == 0) mismatch("A must be square and nonempty");
  if (!spec.b.is_square() || m == 0) mismatch("B must be square and nonempty");
  const std::size_t mn = checked_pow(m, n, limits.sparse_order);

  SylvesterSystem sys;
  sys.rhs = spec.rhs.rows() == 0 && spec.rhs.cols() == 0 ? DenseMatrix(n, mn) : spec.rhs;
  const SparseMatrix id = SparseMatrix::identity(m);
  const SparseMatrix b = to_sparse(spec.b);
  sys.pairs.push_back({to_sparse(spec.a), kron_power(id, n, limits)});
  for (std::size_t h = 2; h <= n + 1; ++h) {
    const SparseMatrix left = kron_power(id, h - 2, limits);
    const SparseMatrix right = kron_power(id, n - h + 1, limits);
    SparseMatrix bh = transpose(kron(kron(left, b, limits), right, limits));
    sys.pairs.push_back(
        {to_sparse(basis_matrix(CanonicalBasis::projector(n, h - 1))), std::move(bh)});
  }
  sys.validate();
  return sys;
}

SolveResult solve(const SylvesterSystem& sys, const SolveOptions& options) {
  const SparseMatrix coef = assemble_coefficient(sys, options.limits);
  if (!coef.is_square()) {
    mismatch("coefficient is " + shape(coef.rows(), coef.cols()) +
             "; only square systems have a unique-solve path");
  }
  const std::size_t order = coef.rows();
  if (order > options.limits.dense_solve_order) {
    throw Error(ErrorKind::kDimensionOverflow,
                "order " + std::to_string(order) + " exceeds the LU cap " +
                    std::to_string(options.limits.dense_solve_order));
  }
  const auto [m, s] = sys.unknown_shape();
  SolveResult out;
  if (order == 0) {
    out.x = DenseMatrix(m, s);
    return out;
  }

  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for (const Triple& t : coef.triples()) {
    dense(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dense);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  out.min_pivot = diag.minCoeff();
  out.max_pivot = diag.maxCoeff();
  if (!(out.min_pivot >= options.pivot_ratio * out.max_pivot) || out.max_pivot == 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "singular coefficient: pivot ratio %.3g < %.3g",
                  out.max_pivot == 0.0 ? 0.0 : out.min_pivot / out.max_pivot,
                  options.pivot_ratio);
    throw Error(ErrorKind::kSingularCoefficient, buf);
  }

  const DenseMatrix c = vec(sys.rhs);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = c(static_cast<std::size_t>(i), 0);
  const Eigen::VectorXcd sol = lu.solve(rhs);
  DenseMatrix v(order, 1);
  for (std::size_t i = 0; i < order; ++i) v(i, 0) = sol(static_cast<Eigen::Index>(i));
  out.x = unvec(v, m, s);
  out.residual = frobenius_norm(subtract(apply_operator(sys, out.x), sys.rhs));
  return out;
}

const char* to_string(UniquenessReport::Route route) {
  switch (route) {
    case UniquenessReport::Route::kClosedForm: return "closed-form";
    case UniquenessReport::Route::kReducedSpectrum: return "reduced-spectrum";
    case UniquenessReport::Route::kDenseSpectrum: return "dense-spectrum";
  }
  return "unknown";
}

std::optional<Complex> uniform_value(const DenseMatrix& b, double tol) {
  if (b.rows() == 0 || b.cols() == 0) return std::nullopt;
  const Complex h = b(0, 0);
  for (const Complex& z : b.entries()) {
    if (std::abs(z - h) > tol) return std::nullopt;
  }
  return h;
}

UniquenessReport wreath_unique_solvable(const DenseMatrix& a, const DenseMatrix& b,
                                        double tol, const Limits& limits) {
  if (!a.is_square() || a.rows() == 0) mismatch("A must be square and nonempty");
  if (!b.is_square() || b.rows() == 0) mismatch("B must be square and nonempty");
  UniquenessReport out;

  const auto h = uniform_value(b);
  if (h && is_diagonal(a)) {
    std::vector<Complex> diag(a.rows());
    for (std::size_t k = 0; k < a.rows(); ++k) diag[k] = a(k, k);
    out.route = UniquenessReport::Route::kClosedForm;
    out.witness = diag_uniform_singularity(diag, b.rows(), *h, tol);
    out.unique = !out.witness.has_value();
    return out;
  }

  std::vector<Complex> values;
  if (const auto spec = is_circulant(b)) {
    out.route = UniquenessReport::Route::kReducedSpectrum;
    SpectrumOptions opts;
    opts.limits = limits;
    values = spectrum_reduced_values(a, *spec, opts);
  } else {
    out.route = UniquenessReport::Route::kDenseSpectrum;
    values = dense_eigenvalues(to_dense(wreath_product(a, b, limits), limits), limits);
  }
  for (const Complex& z : values) {
    if (std::abs(z) <= tol && (!out.zero_eigenvalue || std::abs(z) < std::abs(*out.zero_eigenvalue))) {
      out.zero_eigenvalue = z;
    }
  }
  out.unique = !out.zero_eigenvalue.has_value();
  return out;
}

SolveResult solve_wreath(const WreathSylvesterSpec& spec, const SolveOptions& options) {
  const SylvesterSystem sys = expand_wreath_system(spec, options.limits);
  try {
    return solve(sys, options);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kSingularCoefficient) throw;
    const auto h = uniform_value(spec.b);
    if (!h || !is_diagonal(spec.a)) throw;
    std::vector<Complex> diag(spec.a.rows());
    for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = spec.a(k, k);
    const auto w = diag_uniform_singularity(diag, spec.b.rows(), *h, 1e-9);
    if (!w) throw;
    throw Error(ErrorKind::kSingularCoefficient,
                std::string(e.what()) + " (" + witness_text(*w) + ")");
  }
}

SystemFile system_from_json(const nlohmann::json& j, const Limits& limits) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "system: expected an object");
  if (!j.contains("C")) throw Error(ErrorKind::kParse, "system: missing \"C\"");
  SystemFile out;
  const DenseMatrix c = as_dense(matrix_from_json(j["C"], "system.C"), limits);
  if (j.contains("wreath")) {
    const auto& w = j["wreath"];
    if (!w.is_object() || !w.contains("A") || !w.contains("B")) {
      throw Error(ErrorKind::kParse, "system.wreath: expected {\"A\", \"B\"}");
    }
    WreathSylvesterSpec spec{as_dense(matrix_from_json(w["A"], "system.wreath.A"), limits),
                             as_dense(matrix_from_json(w["B"], "system.wreath.B"), limits),
                             c};
    out.system = expand_wreath_system(spec, limits);
    out.wreath = std::move(spec);
    return out;
  }
  if (!j.contains("pairs") || !j["pairs"].is_array()) {
    throw Error(ErrorKind::kParse, "system: missing \"pairs\" array or \"wreath\" object");
  }
  const auto& pairs = j["pairs"];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string at = "system.pairs[" + std::to_string(i) + "]";
    if (!pairs[i].is_object() || !pairs[i].contains("A") || !pairs[i].contains("B")) {
      throw Error(ErrorKind::kParse, at + ": expected {\"A\", \"B\"}");
    }
    out.system.pairs.push_back({as_sparse(matrix_from_json(pairs[i]["A"], at + ".A")),
                                as_sparse(matrix_from_json(pairs[i]["B"], at + ".B"))});
  }
  out.system.rhs = c;
  out.system.validate();
  return out;
}

nlohmann::json to_json(const UniquenessReport& report) {
  nlohmann::json out = {{"unique", report.unique}, {"route", to_string(report.route)}};
  if (report.witness) {
    out["witness"] = {
        {"k", report.witness->k},
        {"reason", report.witness->reason == SingularityWitness::Reason::kZeroEntry
                       ? "a_k = 0"
                       : "a_k = -m h"},
        {"value", complex_to_json(report.witness->value)}};
  }
  if (report.zero_eigenvalue) out["zero_eigenvalue"] = complex_to_json(*report.zero_eigenvalue);
  return out;
}

}  // namespace wreath

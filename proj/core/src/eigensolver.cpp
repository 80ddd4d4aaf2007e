#include "wreath/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wreath {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Eigenvalue of [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const auto [x, y] = quadratic_eigenvalues(a, b, c, d);
  return std::abs(x - d) <= std::abs(y - d) ? x : y;
}

// Hyman's method on the Hessenberg window [lo, hi]: back-substitute
// (H - lambda I) x = gamma e_lo with x_hi = 1, and return |gamma| / |x|.
// Returns a negative value when a subdiagonal is too small to divide by.
double hyman_backward_error(const DenseMatrix& h, std::size_t lo,
                            std::size_t hi, Complex lambda) {
  const std::size_t len = hi - lo + 1;
  std::vector<Complex> x(len, Complex{});
  x[len - 1] = 1.0;
  double scale = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    for (std::size_t j = lo; j <= hi; ++j) scale = std::max(scale, std::abs(h(i, j)));
  }
  for (std::size_t r = hi; r > lo; --r) {
    // Row r determines x[r-1] through the subdiagonal h(r, r-1).
    Complex acc{};
    for (std::size_t j = r; j <= hi; ++j) {
      const Complex coeff = h(r, j) - (j == r ? lambda : Complex{});
      acc += coeff * x[j - lo];
    }
    const Complex sub = h(r, r - 1);
    if (std::abs(sub) <= kEps * scale) return -1.0;
    x[r - 1 - lo] = -acc / sub;
  }
  Complex gamma{};
  for (std::size_t j = lo; j <= hi; ++j) {
    gamma += (h(lo, j) - (j == lo ? lambda : Complex{})) * x[j - lo];
  }
  double norm = 0.0;
  for (const Complex& z : x) norm += std::norm(z);
  return std::abs(gamma) / std::sqrt(norm);
}

}  // namespace

std::pair<Complex, Complex> quadratic_eigenvalues(Complex a, Complex b,
                                                  Complex c, Complex d) {
  const Complex mean = 0.5 * (a + d);
  const Complex half_gap = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_gap * half_gap + b * c);
  const Complex plus = mean + disc;
  const Complex minus = mean - disc;
  const Complex big = std::abs(plus) >= std::abs(minus) ? plus : minus;
  if (big == Complex{}) return {Complex{}, Complex{}};
  const Complex det = a * d - b * c;
  return {big, det / big};
}

DenseMatrix hessenberg(const DenseMatrix& m) {
  if (!m.is_square()) {
    throw Error(ErrorKind::kDimensionMismatch, "hessenberg needs a square matrix");
  }
  DenseMatrix h = m;
  const std::size_t n = h.rows();
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha_norm += std::norm(h(i, k));
    alpha_norm = std::sqrt(alpha_norm);
    if (alpha_norm == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    // v = x + phase*|x| e1, H <- (I - 2 v v*/v*v) H (I - 2 v v*/v*v).
    std::fill(v.begin(), v.end(), Complex{});
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] += phase * alpha_norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      const Complex f = 2.0 * dot / vnorm2;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= f * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      const Complex f = 2.0 * dot / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= f * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
  }
  return h;
}

std::vector<Complex> block_eigenvalues(const DenseMatrix& m,
                                       const QrOptions& options) {
  if (!m.is_square()) {
    throw Error(ErrorKind::kDimensionMismatch, "eigenvalues need a square matrix");
  }
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (n == 1) return {m(0, 0)};
  if (n == 2) {
    const auto [x, y] = quadratic_eigenvalues(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    return {x, y};
  }

  DenseMatrix h = hessenberg(m);
  const DenseMatrix reference = h;
  double hnorm = 0.0;
  for (const Complex& z : h.entries()) hnorm += std::norm(z);
  hnorm = std::sqrt(hnorm);

  std::vector<Complex> eig;
  eig.reserve(n);
  std::vector<double> cs(n);
  std::vector<Complex> sn(n);

  std::size_t hi = n - 1;
  std::size_t iter = 0;
  const std::size_t budget = options.max_iterations_per_eigenvalue;
  bool done = false;
  while (!done) {
    // Find the start of the unreduced window ending at hi.
    std::size_t lo = hi;
    while (lo > 0) {
      const double s = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      const double floor = s == 0.0 ? kEps * hnorm : kEps * s;
      if (std::abs(h(lo, lo - 1)) <= floor) {
        h(lo, lo - 1) = Complex{};
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(h(hi, hi));
      iter = 0;
      if (hi == 0) break;
      --hi;
      continue;
    }
    if (lo + 1 == hi) {
      const auto [x, y] =
          quadratic_eigenvalues(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      eig.push_back(x);
      eig.push_back(y);
      iter = 0;
      if (lo == 0) break;
      hi = lo - 1;
      continue;
    }
    if (++iter > budget) {
      throw Error(ErrorKind::kNonConvergence,
                  "QR iteration did not converge for a block of order " +
                      std::to_string(n));
    }
    Complex mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1),
                                 h(hi, hi));
    if (iter % 11 == 0) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + Complex(0.75, 0.5) * std::abs(h(hi, hi - 1));
    }

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex a = h(k, k);
      const Complex b = h(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      double c;
      Complex s;
      if (r == 0.0) {
        c = 1.0;
        s = Complex{};
      } else if (std::abs(a) == 0.0) {
        c = 0.0;
        s = 1.0;
      } else {
        c = std::abs(a) / r;
        s = (a / std::abs(a)) * std::conj(b) / r;
      }
      cs[k] = c;
      sn[k] = s;
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex x = h(k, j);
        const Complex y = h(k + 1, j);
        h(k, j) = c * x + s * y;
        h(k + 1, j) = -std::conj(s) * x + c * y;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const double c = cs[k];
      const Complex s = sn[k];
      for (std::size_t i = lo; i <= std::min(k + 1, hi); ++i) {
        const Complex x = h(i, k);
        const Complex y = h(i, k + 1);
        h(i, k) = x * c + y * std::conj(s);
        h(i, k + 1) = -x * s + y * c;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }

  // Hyman's estimate degrades across a near-zero subdiagonal (repeated
  // eigenvalues force one), so check each eigenvalue against the unreduced
  // windows of the reference. Dropping a subdiagonal below half the bound is
  // itself a backward perturbation within the bound.
  const double split = 0.5 * options.residual_tol * hnorm;
  std::vector<std::pair<std::size_t, std::size_t>> windows;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || std::abs(reference(i, i - 1)) <= split) {
      windows.emplace_back(start, i - 1);
      start = i;
    }
  }
  for (const Complex& lambda : eig) {
    double err = -1.0;
    for (const auto& [wlo, whi] : windows) {
      const double e = wlo == whi ? std::abs(reference(wlo, wlo) - lambda)
                                  : hyman_backward_error(reference, wlo, whi, lambda);
      if (e >= 0.0 && (err < 0.0 || e < err)) err = e;
    }
    if (err >= 0.0 &&
        err > options.residual_tol * (hnorm + std::abs(lambda))) {
      throw Error(ErrorKind::kNonConvergence,
                  "eigenvalue residual check failed for a block of order " +
                      std::to_string(n));
    }
  }
  return eig;
}

}  // namespace wreath

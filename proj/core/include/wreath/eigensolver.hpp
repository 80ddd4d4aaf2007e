#pragma once

// Eigenvalues of the small order-n blocks produced by the circulant
// reduction. Order <= 2 uses closed-form quadratic roots; larger orders use
// Householder reduction to Hessenberg form followed by Wilkinson-shifted
// complex QR with deflation. Each accepted eigenvalue passes a backward-error
// check computed by Hessenberg back-substitution (Hyman's method).
//
// The dense oracle in spectral.hpp uses a separate solver on purpose.

#include <utility>
#include <vector>

#include "wreath/tensor.hpp"

namespace wreath {

/// Both roots of det([[a, b], [c, d]] - x I). The larger-magnitude root is
/// formed first and the other is recovered from the determinant.
std::pair<Complex, Complex> quadratic_eigenvalues(Complex a, Complex b,
                                                  Complex c, Complex d);

struct QrOptions {
  std::size_t max_iterations_per_eigenvalue = 60;
  /// Relative backward-error bound for the Hyman residual check.
  double residual_tol = 1e-6;
};

/// All eigenvalues of a square matrix, in no particular order. Throws
/// kNonConvergence when the iteration stalls or a residual check fails.
std::vector<Complex> block_eigenvalues(const DenseMatrix& m,
                                       const QrOptions& options = {});

/// Reduces a copy of `m` to upper Hessenberg form (similarity transform).
DenseMatrix hessenberg(const DenseMatrix& m);

}  // namespace wreath

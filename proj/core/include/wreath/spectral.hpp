#pragma once

// Spectrum of A wr B when B is circulant.
//
// With B = circ(b_0, ..., b_{m-1}) (first row b_0 b_1 ... b_{m-1}, each later
// row the cyclic right shift of the one above), A wr B is similar to the
// direct sum over all tuples (i_1, ..., i_n) in {0..m-1}^n of the order-n
// blocks
//
//   A + sum_t lambda(i_t) C_t,   lambda(j) = sum_i b_i rho^(i j),
//   rho = exp(2 pi i / m),
//
// so its n*m^n eigenvalues are the multiset union of the block spectra.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wreath/eigen_multiset.hpp"
#include "wreath/tensor.hpp"

namespace wreath {

struct CirculantSpec {
  std::vector<Complex> coefficients;

  std::size_t order() const noexcept { return coefficients.size(); }
  /// Entry (h, k) is coefficients[(k - h) mod m].
  DenseMatrix to_matrix() const;
};

/// Coefficients of b if it is circulant within tol, otherwise empty.
std::optional<CirculantSpec> is_circulant(const DenseMatrix& b,
                                          double tol = 1e-12);
/// First (row, col) (0-based) violating the circulant pattern, if any.
std::optional<std::pair<std::size_t, std::size_t>> circulant_violation(
    const DenseMatrix& b, double tol = 1e-12);

/// exp(2 pi i k / m), evaluated directly for k mod m.
Complex root_of_unity(std::size_t k, std::size_t m);

/// sum_i b_i rho^(i * i_t); rho^(i i_t) is reduced mod m before evaluation.
Complex circulant_symbol(const CirculantSpec& spec, std::size_t i_t);

/// All m symbols, index j holding circulant_symbol(spec, j).
std::vector<Complex> circulant_symbols(const CirculantSpec& spec);

struct ReducedBlock {
  std::vector<std::size_t> tuple;
  DenseMatrix matrix;
};

/// The block for one tuple.
ReducedBlock reduced_block(const DenseMatrix& a, const CirculantSpec& spec,
                           std::vector<std::size_t> tuple);

/// Visits all m^n blocks in lexicographic tuple order without storing them.
void for_each_reduced_block(const DenseMatrix& a, const CirculantSpec& spec,
                            const std::function<void(const ReducedBlock&)>& visit,
                            const Limits& limits = {});

/// Materializes every block; subject to the same enumeration cap.
std::vector<ReducedBlock> reduced_blocks(const DenseMatrix& a,
                                         const CirculantSpec& spec,
                                         const Limits& limits = {});

struct SpectrumOptions {
  double tol = kDefaultClusterTol;
  /// Worker threads for the per-block eigensolves; 0 means hardware default.
  std::size_t threads = 1;
  Limits limits = {};
};

/// Union of the block spectra; total = n*m^n.
EigenMultiset spectrum_reduced(const DenseMatrix& a, const CirculantSpec& spec,
                               const SpectrumOptions& options = {});

/// Raw (unclustered) eigenvalues of every block, concatenated in tuple order.
std::vector<Complex> spectrum_reduced_values(const DenseMatrix& a,
                                             const CirculantSpec& spec,
                                             const SpectrumOptions& options = {});

/// The two eigenvalues of the (i1, i2) block of an order-2 A via the explicit
/// quadratic formula, in (+, -) order of the square root.
std::pair<Complex, Complex> closed_form_2x2_pair(const DenseMatrix& a,
                                                 const CirculantSpec& spec,
                                                 std::size_t i1, std::size_t i2);

/// All m^2 pairs from closed_form_2x2_pair, aggregated.
EigenMultiset spectrum_2x2_closed_form(const DenseMatrix& a,
                                       const CirculantSpec& spec,
                                       double tol = kDefaultClusterTol);

// Diagonal A = diag(a_1..a_n) and uniform B = h J_m.

/// {a_k + m h with multiplicity m^(n-1), a_k with multiplicity (m-1) m^(n-1)}.
EigenMultiset spectrum_diag_uniform(std::span<const Complex> diag,
                                    std::size_t m, Complex h,
                                    double tol = kDefaultClusterTol);

/// prod_k (a_k + m h)^(m^(n-1)) * a_k^((m-1) m^(n-1)).
Complex det_diag_uniform(std::span<const Complex> diag, std::size_t m,
                         Complex h);

struct SingularityWitness {
  enum class Reason { kZeroEntry, kMinusMH };
  std::size_t k = 0;  // 1-based index into diag
  Reason reason = Reason::kZeroEntry;
  Complex value;
};

/// First k with a_k = 0 or a_k = -m h (within tol), if any.
std::optional<SingularityWitness> diag_uniform_singularity(
    std::span<const Complex> diag, std::size_t m, Complex h, double tol = 0.0);

bool is_singular_diag_uniform(std::span<const Complex> diag, std::size_t m,
                              Complex h, double tol = 0.0);

// Dense oracle path.

/// All eigenvalues of a general complex matrix (order <= dense_eigen_order).
std::vector<Complex> dense_eigenvalues(const DenseMatrix& m,
                                       const Limits& limits = {});
EigenMultiset dense_spectrum(const DenseMatrix& m,
                             double tol = kDefaultClusterTol,
                             const Limits& limits = {});
/// Determinant by LU with partial pivoting.
Complex dense_determinant(const DenseMatrix& m, const Limits& limits = {});

/// Integer power by repeated squaring (exact for small integer bases).
Complex ipow(Complex base, std::uint64_t exp);

}  // namespace wreath

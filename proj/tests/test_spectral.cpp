#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "wreath/eigensolver.hpp"
#include "wreath/spectral.hpp"
#include "wreath/wreath_product.hpp"

using namespace wreath;

namespace {

const double kS = 3.0 * std::sqrt(3.0) / 2.0;

DenseMatrix example_a() { return DenseMatrix::from_rows({{1, 1}, {0, 2}}); }
CirculantSpec example_spec() { return {{1.0, 2.0, -1.0}}; }

// Per-tuple spectra (i1, i2) -> two eigenvalues.
struct TableRow {
  std::size_t i1, i2;
  Complex x, y;
};
const std::vector<TableRow>& table() {
  static const std::vector<TableRow> rows = {
      {0, 0, {3, 0}, {4, 0}},
      {0, 1, {3, 0}, {2.5, kS}},
      {0, 2, {3, 0}, {2.5, -kS}},
      {1, 0, {4, 0}, {1.5, kS}},
      {1, 1, {1.5, kS}, {2.5, kS}},
      {1, 2, {1.5, kS}, {2.5, -kS}},
      {2, 0, {1.5, -kS}, {4, 0}},
      {2, 1, {1.5, -kS}, {2.5, kS}},
      {2, 2, {1.5, -kS}, {2.5, -kS}},
  };
  return rows;
}

bool same_pair(std::pair<Complex, Complex> got, Complex x, Complex y, double tol) {
  auto d = componentwise_distance;
  return (d(got.first, x) <= tol && d(got.second, y) <= tol) ||
         (d(got.first, y) <= tol && d(got.second, x) <= tol);
}

EigenMultiset dense_of_wreath(const DenseMatrix& a, const DenseMatrix& b) {
  return dense_spectrum(to_dense(wreath_product(a, b)));
}

}  // namespace

TEST(Circulant, Detection) {
  const auto id = is_circulant(DenseMatrix::identity(4));
  ASSERT_TRUE(id);
  EXPECT_EQ(id->coefficients, (std::vector<Complex>{1, 0, 0, 0}));
  const auto ex = is_circulant(example_spec().to_matrix());
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->coefficients, (std::vector<Complex>{1, 2, -1}));
  EXPECT_EQ(example_spec().to_matrix(),
            DenseMatrix::from_rows({{1, 2, -1}, {-1, 1, 2}, {2, -1, 1}}));
  const DenseMatrix bad = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  EXPECT_FALSE(is_circulant(bad));
  const auto where = circulant_violation(bad);
  ASSERT_TRUE(where);
  EXPECT_EQ(*where, (std::pair<std::size_t, std::size_t>{1, 0}));
}

TEST(Circulant, Symbols) {
  const CirculantSpec spec = example_spec();
  EXPECT_LE(std::abs(circulant_symbol(spec, 0) - Complex(2, 0)), 1e-14);
  EXPECT_LE(std::abs(circulant_symbol(spec, 1) - Complex(0.5, kS)), 1e-14);
  EXPECT_LE(std::abs(circulant_symbol(spec, 2) - Complex(0.5, -kS)), 1e-14);
  const CirculantSpec scalar{{Complex(3, 1), 0, 0, 0}};
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(circulant_symbol(scalar, t), Complex(3, 1));
}

TEST(Circulant, RootOfUnityIsDirect) {
  EXPECT_EQ(root_of_unity(0, 7), Complex(1, 0));
  const Complex z = root_of_unity(10, 7);
  EXPECT_LE(std::abs(z - std::polar(1.0, 2 * std::numbers::pi * 3 / 7)), 1e-15);
}

TEST(Circulant, SymbolsAreTheSpectrumOfB) {
  oracle::Rng rng(41);
  for (std::size_t m = 1; m <= 6; ++m) {
    const CirculantSpec spec = rng.circulant(m);
    const auto symbols = circulant_symbols(spec);
    const auto eig = dense_eigenvalues(spec.to_matrix());
    EXPECT_TRUE(eigen_values_diff(symbols, eig, 1e-10).equal) << "m=" << m;
  }
}

TEST(Circulant, ShiftSpectrumIsRootsOfUnity) {
  for (std::size_t m = 2; m <= 6; ++m) {
    const DenseMatrix shift = basis_matrix(CanonicalBasis::cyclic_shift(m, 1));
    std::vector<Complex> roots;
    for (std::size_t k = 0; k < m; ++k) roots.push_back(std::polar(1.0, 2 * std::numbers::pi * k / m));
    EXPECT_TRUE(eigen_values_diff(dense_eigenvalues(shift), roots, 1e-10).equal);
    CirculantSpec spec;
    spec.coefficients.assign(m, 0.0);
    spec.coefficients[1] = 1.0;
    EXPECT_TRUE(eigen_values_diff(circulant_symbols(spec), roots, 1e-12).equal);
  }
}

TEST(ReducedBlocks, ExampleFirstTuple) {
  const ReducedBlock blk = reduced_block(example_a(), example_spec(), {0, 0});
  EXPECT_LE(oracle::max_diff(blk.matrix, DenseMatrix::from_rows({{3, 1}, {0, 4}})), 1e-14);
}

TEST(ReducedBlocks, LexicographicAndDiagonalOnly) {
  oracle::Rng rng(42);
  const DenseMatrix a = rng.dense(3, 3);
  const CirculantSpec spec = rng.circulant(3);
  const auto blocks = reduced_blocks(a, spec);
  ASSERT_EQ(blocks.size(), 27u);
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    if (p > 0) EXPECT_LT(blocks[p - 1].tuple, blocks[p].tuple);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        if (r != c) EXPECT_EQ(blocks[p].matrix(r, c), a(r, c));
  }
  const auto zero_blocks = reduced_blocks(a, CirculantSpec{{0, 0, 0}});
  for (const auto& b : zero_blocks) EXPECT_EQ(b.matrix, a);
}

TEST(ReducedBlocks, EnumerationCap) {
  Limits small;
  small.enumeration = 8;
  try {
    for_each_reduced_block(DenseMatrix::identity(4), CirculantSpec{{1, 0}},
                           [](const ReducedBlock&) {}, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEnumerationOverflow);
  }
}

TEST(ReducedBlocks, OrderOneMatchesShiftedB) {
  oracle::Rng rng(43);
  const CirculantSpec spec = rng.circulant(5);
  const Complex a11 = rng.complex();
  const DenseMatrix a = DenseMatrix::from_rows({{a11}});
  const auto reduced = spectrum_reduced(a, spec);
  const auto dense = dense_spectrum(spec.to_matrix() + a11 * DenseMatrix::identity(5));
  EXPECT_TRUE(eigen_multiset_equal(reduced, dense, 1e-10));
}

TEST(SpectrumReduced, ExampleTable) {
  const auto values = spectrum_reduced_values(example_a(), example_spec());
  ASSERT_EQ(values.size(), 18u);
  for (std::size_t r = 0; r < 9; ++r) {
    const TableRow& row = table()[r];
    EXPECT_EQ(row.i1 * 3 + row.i2, r);
    EXPECT_TRUE(same_pair({values[2 * r], values[2 * r + 1]}, row.x, row.y, 1e-10))
        << row.i1 << "," << row.i2;
  }
  const EigenMultiset s = spectrum_reduced(example_a(), example_spec());
  EXPECT_EQ(s.total(), 18u);
  ASSERT_EQ(s.distinct(), 6u);
  for (const EigenEntry& e : s.entries()) EXPECT_EQ(e.multiplicity, 3u);
  for (Complex z : {Complex(4), Complex(3), Complex(2.5, kS), Complex(2.5, -kS),
                    Complex(1.5, kS), Complex(1.5, -kS)}) {
    EXPECT_EQ(s.multiplicity_of(z, 1e-10), 3u);
  }
  EXPECT_LE(std::abs(s.sum() - Complex(45)), 1e-10);
}

TEST(SpectrumReduced, ExampleAgainstDenseOracle) {
  const auto reduced = spectrum_reduced(example_a(), example_spec());
  const auto dense = dense_of_wreath(example_a(), example_spec().to_matrix());
  EXPECT_TRUE(eigen_multiset_equal(reduced, dense, 1e-8));
}

TEST(SpectrumReduced, KernelPairIsZero) {
  const Complex h(1.25, -0.5);
  const auto s = spectrum_reduced(h * DenseMatrix::identity(3), CirculantSpec{{-h, 0, 0, 0}});
  ASSERT_EQ(s.distinct(), 1u);
  EXPECT_EQ(s.total(), 3u * 64u);
  EXPECT_LE(std::abs(s.entries()[0].value), 1e-14);
}

TEST(SpectrumReduced, ReductionMatchesDenseOracleOnGrid) {
  oracle::Rng rng(44);
  const std::vector<std::pair<std::size_t, std::size_t>> grid = {
      {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}};
  for (auto [n, m] : grid) {
    for (int trial = 0; trial < 2; ++trial) {
      const DenseMatrix a = rng.dense(n, n);
      const CirculantSpec spec = rng.circulant(m);
      const auto reduced = spectrum_reduced(a, spec);
      EXPECT_EQ(reduced.total(), static_cast<std::size_t>(wreath_order(n, m)));
      EXPECT_TRUE(eigen_multiset_equal(reduced, dense_of_wreath(a, spec.to_matrix()), 1e-8))
          << "n=" << n << " m=" << m;
      const double order = static_cast<double>(reduced.total());
      EXPECT_LE(std::abs(reduced.sum() - wreath_trace(a, spec.to_matrix())), 1e-8 * order);
    }
  }
}

TEST(SpectrumReduced, ThreadedIsDeterministic) {
  oracle::Rng rng(45);
  const DenseMatrix a = rng.dense(3, 3);
  const CirculantSpec spec = rng.circulant(4);
  SpectrumOptions one, many;
  many.threads = 4;
  EXPECT_EQ(spectrum_reduced_values(a, spec, one), spectrum_reduced_values(a, spec, many));
  EXPECT_EQ(to_csv(spectrum_reduced(a, spec, one)), to_csv(spectrum_reduced(a, spec, many)));
}

TEST(ClosedForm2x2, ExampleTableExactly) {
  for (const TableRow& row : table()) {
    const auto got = closed_form_2x2_pair(example_a(), example_spec(), row.i1, row.i2);
    EXPECT_TRUE(same_pair(got, row.x, row.y, 1e-10)) << row.i1 << "," << row.i2;
  }
  const auto s = spectrum_2x2_closed_form(example_a(), example_spec());
  EXPECT_TRUE(eigen_multiset_equal(s, spectrum_reduced(example_a(), example_spec()), 1e-10));
}

TEST(ClosedForm2x2, DiagonalDegenerates) {
  const DenseMatrix a = DenseMatrix::from_rows({{Complex(2, 1), 0}, {0, Complex(-1, 3)}});
  oracle::Rng rng(46);
  const CirculantSpec spec = rng.circulant(4);
  for (std::size_t i1 = 0; i1 < 4; ++i1) {
    for (std::size_t i2 = 0; i2 < 4; ++i2) {
      const auto got = closed_form_2x2_pair(a, spec, i1, i2);
      EXPECT_TRUE(same_pair(got, a(0, 0) + circulant_symbol(spec, i1),
                            a(1, 1) + circulant_symbol(spec, i2), 1e-12));
    }
  }
}

TEST(ClosedForm2x2, AgreesWithReduction) {
  oracle::Rng rng(47);
  for (std::size_t m = 1; m <= 5; ++m) {
    const DenseMatrix a = rng.dense(2, 2);
    const CirculantSpec spec = rng.circulant(m);
    EXPECT_TRUE(eigen_multiset_equal(spectrum_2x2_closed_form(a, spec),
                                     spectrum_reduced(a, spec), 1e-10));
  }
  EXPECT_THROW((void)spectrum_2x2_closed_form(DenseMatrix::identity(3), CirculantSpec{{1, 0}}),
               Error);
}

TEST(DiagUniform, DeterminantValue) {
  const std::vector<Complex> diag = {1, 2};
  EXPECT_EQ(det_diag_uniform(diag, 2, 1.0), Complex(576));
  const DenseMatrix w = to_dense(wreath_product(DenseMatrix::diagonal(diag),
                                                basis_matrix(CanonicalBasis::uniform(2))));
  EXPECT_LE(std::abs(dense_determinant(w) - Complex(576)), 576 * 1e-10);
}

TEST(DiagUniform, SpectrumShape) {
  const std::vector<Complex> diag = {1, 2, Complex(0.5, 1)};
  const auto s = spectrum_diag_uniform(diag, 3, Complex(2, 0));
  EXPECT_EQ(s.total(), 81u);
  EXPECT_EQ(s.multiplicity_of(Complex(7), 0), 9u);
  EXPECT_EQ(s.multiplicity_of(Complex(1), 0), 18u);
  EXPECT_EQ(s.multiplicity_of(Complex(6.5, 1), 0), 9u);
}

TEST(DiagUniform, ZeroUniformFactor) {
  const std::vector<Complex> diag = {2, -3};
  const auto s = spectrum_diag_uniform(diag, 3, 0.0);
  EXPECT_EQ(s.multiplicity_of(2.0, 0), 9u);
  EXPECT_EQ(s.multiplicity_of(-3.0, 0), 9u);
  EXPECT_EQ(det_diag_uniform(diag, 3, 0.0), ipow(2.0, 9) * ipow(-3.0, 9));
}

TEST(DiagUniform, AgreesWithReductionAndOracle) {
  oracle::Rng rng(48);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      std::vector<Complex> diag;
      for (std::size_t k = 0; k < n; ++k) diag.push_back(rng.complex());
      const Complex h = rng.complex();
      const auto closed = spectrum_diag_uniform(diag, m, h);
      CirculantSpec spec;
      spec.coefficients.assign(m, h);
      EXPECT_TRUE(eigen_multiset_equal(closed, spectrum_reduced(DenseMatrix::diagonal(diag), spec),
                                       1e-8));
      const DenseMatrix w = to_dense(wreath_product(DenseMatrix::diagonal(diag), h * basis_matrix(CanonicalBasis::uniform(m))));
      EXPECT_TRUE(eigen_multiset_equal(closed, dense_spectrum(w), 1e-8));
      const Complex det = det_diag_uniform(diag, m, h);
      EXPECT_LE(std::abs(det - closed.product()), 1e-8 * std::max(1.0, std::abs(det)));
      EXPECT_LE(std::abs(det - dense_determinant(w)), 1e-8 * std::max(1.0, std::abs(det)));
    }
  }
}

TEST(DiagUniform, Singularity) {
  const std::size_t m = 3;
  const Complex h(0.5, 0);
  const std::vector<Complex> minus_mh = {-1.5, 1.0};
  const auto w1 = diag_uniform_singularity(minus_mh, m, h);
  ASSERT_TRUE(w1);
  EXPECT_EQ(w1->k, 1u);
  EXPECT_EQ(w1->reason, SingularityWitness::Reason::kMinusMH);
  EXPECT_TRUE(is_singular_diag_uniform(minus_mh, m, h));
  EXPECT_EQ(det_diag_uniform(minus_mh, m, h), Complex(0));

  const std::vector<Complex> zero = {1.0, 0.0};
  const auto w2 = diag_uniform_singularity(zero, m, h);
  ASSERT_TRUE(w2);
  EXPECT_EQ(w2->k, 2u);
  EXPECT_EQ(w2->reason, SingularityWitness::Reason::kZeroEntry);

  EXPECT_FALSE(is_singular_diag_uniform(std::vector<Complex>{1.0, 2.0}, m, h));
}

TEST(DenseOracle, SimpleCases) {
  const auto id = dense_spectrum(DenseMatrix::identity(3));
  ASSERT_EQ(id.distinct(), 1u);
  EXPECT_EQ(id.entries()[0].multiplicity, 3u);
  EXPECT_LE(std::abs(id.entries()[0].value - 1.0), 1e-14);

  const DenseMatrix upper = DenseMatrix::from_rows({{1, 5, 2}, {0, Complex(2, 1), 7}, {0, 0, -3}});
  EXPECT_TRUE(eigen_values_diff(dense_eigenvalues(upper),
                                std::vector<Complex>{1, Complex(2, 1), -3}, 1e-12)
                  .equal);
  Limits small;
  small.dense_eigen_order = 2;
  EXPECT_THROW((void)dense_eigenvalues(DenseMatrix::identity(3), small), Error);
}

TEST(Eigensolver, QuadraticIsStable) {
  // Roots 1e8 and 1e-8: the small one must survive cancellation.
  const auto [x, y] = quadratic_eigenvalues(1e8, 1.0, -1.0, 0.0);
  EXPECT_LE(std::abs(x - 1e8), 1e-6);
  EXPECT_LE(std::abs(y - 1e-8), 1e-20);
  const auto [p, q] = quadratic_eigenvalues(0, 1, -1, 0);
  EXPECT_TRUE(same_pair({p, q}, Complex(0, 1), Complex(0, -1), 1e-15));
}

TEST(Eigensolver, HessenbergIsSimilar) {
  oracle::Rng rng(49);
  const DenseMatrix m = rng.dense(6, 6);
  const DenseMatrix h = hessenberg(m);
  for (std::size_t r = 2; r < 6; ++r)
    for (std::size_t c = 0; c + 1 < r; ++c) EXPECT_LE(std::abs(h(r, c)), 1e-13);
  EXPECT_LE(std::abs(trace(h) - trace(m)), 1e-12);
  EXPECT_TRUE(eigen_values_diff(dense_eigenvalues(h), dense_eigenvalues(m), 1e-10).equal);
}

TEST(Eigensolver, RandomBlocksAgreeWithOracle) {
  oracle::Rng rng(50);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const DenseMatrix m = rng.dense(n, n, trial % 2 == 0);
      const auto got = block_eigenvalues(m);
      ASSERT_EQ(got.size(), n);
      EXPECT_TRUE(eigen_values_diff(got, dense_eigenvalues(m), 1e-9).equal) << "n=" << n;
    }
  }
}

TEST(Eigensolver, StructuredBlocks) {
  // Permutation, nilpotent-plus-identity, zero and already-triangular input.
  const DenseMatrix shift = basis_matrix(CanonicalBasis::cyclic_shift(5, 1));
  EXPECT_TRUE(eigen_values_diff(block_eigenvalues(shift), dense_eigenvalues(shift), 1e-10).equal);
  const DenseMatrix z(4, 4);
  for (const Complex& v : block_eigenvalues(z)) EXPECT_EQ(v, Complex(0));
  const DenseMatrix tri = DenseMatrix::from_rows({{1, 2, 3}, {0, 4, 5}, {0, 0, 6}});
  EXPECT_TRUE(eigen_values_diff(block_eigenvalues(tri), std::vector<Complex>{1, 4, 6}, 1e-12).equal);
  EXPECT_THROW((void)block_eigenvalues(DenseMatrix(2, 3)), Error);
}

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "wreath/eigen_multiset.hpp"

using namespace wreath;

TEST(EigenMultiset, PermutationIsEqual) {
  const auto x = EigenMultiset::from_values(std::vector<Complex>{1, 1, 2});
  const auto y = EigenMultiset::from_values(std::vector<Complex>{2, 1, 1});
  EXPECT_TRUE(eigen_multiset_equal(x, y, 1e-12));
  EXPECT_EQ(x.total(), 3u);
  EXPECT_EQ(x.distinct(), 2u);
  EXPECT_EQ(x.multiplicity_of(1.0, 0.0), 2u);
}

TEST(EigenMultiset, OutsideToleranceDiffers) {
  const double tol = 1e-8;
  const auto x = EigenMultiset::from_values(std::vector<Complex>{1.0}, tol);
  const auto y = EigenMultiset::from_values(std::vector<Complex>{1.0 + 2 * tol}, tol);
  EXPECT_FALSE(eigen_multiset_equal(x, y, tol));
  const auto d = eigen_multiset_diff(x, y, tol);
  EXPECT_EQ(d.only_left.size(), 1u);
  EXPECT_EQ(d.only_right.size(), 1u);
}

TEST(EigenMultiset, MultiplicityMismatch) {
  const auto x = EigenMultiset::from_values(std::vector<Complex>{1, 1, 2});
  const auto y = EigenMultiset::from_values(std::vector<Complex>{1, 2, 2});
  EXPECT_FALSE(eigen_multiset_equal(x, y, 1e-6));
}

TEST(EigenMultiset, ClusteringIsSingleLinkage) {
  const double tol = 1e-3;
  const auto s = EigenMultiset::from_values(
      std::vector<Complex>{0.0, 0.0009, 0.0018, Complex(0.0009, 0.5)}, tol);
  ASSERT_EQ(s.distinct(), 2u);
  EXPECT_EQ(s.multiplicity_of(0.0009, 1e-15), 3u);
  EXPECT_EQ(s.multiplicity_of(Complex(0.0009, 0.5), 0.0), 1u);
}

TEST(EigenMultiset, CoarserToleranceMergesDeterministically) {
  std::vector<Complex> v = {1.0, 1.00005, 2.0, 2.00002};
  const auto fine = EigenMultiset::from_values(v, 1e-8);
  const auto coarse = EigenMultiset::from_values(v, 1e-4);
  EXPECT_EQ(fine.distinct(), 4u);
  EXPECT_EQ(coarse.distinct(), 2u);
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(to_csv(coarse), to_csv(EigenMultiset::from_values(v, 1e-4)));
}

TEST(EigenMultiset, SortedOutputAndFormats) {
  const auto s = EigenMultiset::from_values(
      std::vector<Complex>{Complex(1, -1), Complex(-0.0, 2), Complex(1, -1), Complex(0.5, 0)});
  EXPECT_EQ(to_csv(s), "re,im,multiplicity\n0,2,1\n0.5,0,1\n1,-1,2\n");
  const auto j = to_json(s);
  EXPECT_EQ(j["total"], 4);
  EXPECT_EQ(j["eigenvalues"].size(), 3u);
  EXPECT_EQ(j["eigenvalues"][2]["multiplicity"], 2);
}

TEST(EigenMultiset, SumProductMerge) {
  const auto x = EigenMultiset::from_values(std::vector<Complex>{2, 2, 3});
  EXPECT_EQ(x.sum(), Complex(7));
  EXPECT_EQ(x.product(), Complex(12));
  const auto y = x.merged(EigenMultiset::from_values(std::vector<Complex>{3}));
  EXPECT_EQ(y.multiplicity_of(3.0, 0), 2u);
  EXPECT_EQ(y.total(), 4u);
  EXPECT_THROW((void)EigenMultiset::from_values(std::vector<Complex>{1}, -1.0), Error);
}

TEST(EigenMultiset, MatchingBeatsSortedPairing) {
  // Sorting by (re, im) pairs a0 with b1 and a1 with b0, both outside tol;
  // the optimal matching pairs each with its near neighbour.
  const double tol = 1e-6;
  const std::vector<Complex> a = {Complex(1.0, 1.0), Complex(1.0 + 5e-7, -1.0)};
  const std::vector<Complex> b = {Complex(1.0 + 5e-7, 1.0), Complex(1.0, -1.0)};
  EXPECT_TRUE(eigen_values_diff(a, b, tol).equal);
}

TEST(EigenMultiset, LargeInputsUseTheGreedyPath) {
  oracle::Rng rng(61);
  std::vector<Complex> a;
  for (int i = 0; i < 3000; ++i) a.push_back(rng.complex());
  std::vector<Complex> b = a;
  std::reverse(b.begin(), b.end());
  for (auto& z : b) z += Complex(1e-12, -1e-12);
  EXPECT_TRUE(eigen_values_diff(a, b, 1e-10).equal);
  b[17] += 1e-3;
  const auto d = eigen_values_diff(a, b, 1e-10);
  EXPECT_FALSE(d.equal);
  EXPECT_EQ(d.only_left.size(), 1u);
  EXPECT_EQ(d.only_right.size(), 1u);
}

TEST(EigenMultiset, RandomPermutationsMatch) {
  oracle::Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> a;
    const std::size_t n = rng.index(1, 60);
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(Complex(rng.integer(-2, 2), rng.integer(-2, 2)));
    }
    std::vector<Complex> b = a;
    for (std::size_t i = b.size(); i > 1; --i) std::swap(b[i - 1], b[rng.index(0, i - 1)]);
    EXPECT_TRUE(eigen_multiset_equal(EigenMultiset::from_values(a), EigenMultiset::from_values(b),
                                     1e-12));
  }
}

TEST(EigenMultiset, GreedyVerificationRecoversMaximumMatching) {
  // Greedy hands b0 to a0 (closest), stranding a1 whose only partner is b0;
  // the augmenting pass reroutes a0 to b1.
  const double tol = 1e-6;
  std::vector<Complex> a, b;
  for (int i = 0; i < 600; ++i) {
    a.emplace_back(10.0 + i, 0.0);
    b.emplace_back(10.0 + i, 0.0);
  }
  a.emplace_back(0.0, 0.0);
  a.emplace_back(0.9e-6, 0.0);
  b.emplace_back(0.45e-6, 0.0);
  b.emplace_back(-0.5e-6, 0.0);
  const auto d = eigen_values_diff(a, b, tol);
  EXPECT_TRUE(d.equal) << d.only_left.size();
  EXPECT_LE(d.max_pair_distance, tol);
}

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/tensor.hpp"

namespace wreath {

inline constexpr double kDefaultClusterTol = 1e-8;

struct EigenEntry {
  Complex value;
  std::size_t multiplicity = 1;

  friend bool operator==(const EigenEntry&, const EigenEntry&) = default;
};

/// A spectrum with multiplicities. Raw values are grouped by single-linkage
/// clustering on the componentwise distance max(|d re|, |d im|) <= tol; each
/// cluster is represented by its mean. Entries are kept sorted by (re, im,
/// multiplicity), so equal inputs always produce identical output.
class EigenMultiset {
 public:
  EigenMultiset() = default;

  static EigenMultiset from_values(std::span<const Complex> values,
                                   double tol = kDefaultClusterTol);
  static EigenMultiset from_entries(std::span<const EigenEntry> entries,
                                    double tol = kDefaultClusterTol);

  std::span<const EigenEntry> entries() const noexcept { return entries_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  double tolerance() const noexcept { return tol_; }

  /// Every value repeated by its multiplicity, in entry order.
  std::vector<Complex> expanded() const;
  /// Sum of all values counted with multiplicity.
  Complex sum() const;
  /// Product of all values counted with multiplicity.
  Complex product() const;
  /// Multiplicity of the entry within tol of `value`, or 0.
  std::size_t multiplicity_of(Complex value, double tol) const;

  /// Multiset union: multiplicities add, then entries are re-clustered.
  EigenMultiset merged(const EigenMultiset& other) const;

 private:
  std::vector<EigenEntry> entries_;
  std::size_t total_ = 0;
  double tol_ = kDefaultClusterTol;
};

struct MultisetDiff {
  bool equal = false;
  std::vector<Complex> only_left;
  std::vector<Complex> only_right;
  /// Largest componentwise distance among accepted pairs.
  double max_pair_distance = 0.0;
};

/// Minimum-cost bipartite matching of the expanded multisets; pairs farther
/// apart than tol are reported as unmatched.
MultisetDiff eigen_multiset_diff(const EigenMultiset& x, const EigenMultiset& y,
                                 double tol);
bool eigen_multiset_equal(const EigenMultiset& x, const EigenMultiset& y,
                          double tol);

/// Same comparison on raw value lists, without clustering first.
MultisetDiff eigen_values_diff(std::span<const Complex> x,
                               std::span<const Complex> y, double tol);

/// max(|re(a) - re(b)|, |im(a) - im(b)|).
double componentwise_distance(Complex a, Complex b);

/// "re,im,multiplicity" lines with a header row.
std::string to_csv(const EigenMultiset& s);
nlohmann::json to_json(const EigenMultiset& s);

}  // namespace wreath

#include "wreath/eigen_multiset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace wreath {

namespace {

bool value_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

// Single-linkage clustering of weighted values; returns sorted entries.
std::vector<EigenEntry> cluster(std::vector<EigenEntry> items, double tol) {
  std::sort(items.begin(), items.end(), [](const EigenEntry& a, const EigenEntry& b) {
    return value_less(a.value, b.value);
  });
  DisjointSets sets(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[j].value.real() - items[i].value.real() > tol) break;
      if (std::abs(items[j].value.imag() - items[i].value.imag()) <= tol) {
        sets.unite(i, j);
      }
    }
  }
  std::vector<Complex> sums(items.size(), Complex{});
  std::vector<std::size_t> counts(items.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::size_t root = sets.find(i);
    sums[root] += items[i].value * static_cast<double>(items[i].multiplicity);
    counts[root] += items[i].multiplicity;
  }
  std::vector<EigenEntry> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (counts[i] > 0) {
      out.push_back({sums[i] / static_cast<double>(counts[i]), counts[i]});
    }
  }
  std::sort(out.begin(), out.end(), [](const EigenEntry& a, const EigenEntry& b) {
    if (a.value != b.value) return value_less(a.value, b.value);
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

// Rectangular Hungarian algorithm (rows <= cols), returns the column assigned
// to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n == 0 ? 0 : cost[0].size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) assign[p[j] - 1] = j - 1;
  }
  return assign;
}

constexpr std::size_t kHungarianLimit = 512;

MultisetDiff diff_by_hungarian(std::span<const Complex> x,
                               std::span<const Complex> y, double tol) {
  const bool swap = x.size() > y.size();
  std::span<const Complex> rows = swap ? y : x;
  std::span<const Complex> cols = swap ? x : y;
  const double penalty = static_cast<double>(rows.size() + 1) * (tol + 1.0);
  std::vector<std::vector<double>> cost(rows.size(),
                                        std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double d = componentwise_distance(rows[i], cols[j]);
      cost[i][j] = d <= tol ? d : penalty;
    }
  }
  const auto assign = hungarian(cost);
  std::vector<char> row_ok(rows.size(), 0), col_ok(cols.size(), 0);
  MultisetDiff out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = componentwise_distance(rows[i], cols[assign[i]]);
    if (d <= tol) {
      row_ok[i] = col_ok[assign[i]] = 1;
      out.max_pair_distance = std::max(out.max_pair_distance, d);
    }
  }
  auto& lost_rows = swap ? out.only_right : out.only_left;
  auto& lost_cols = swap ? out.only_left : out.only_right;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!row_ok[i]) lost_rows.push_back(rows[i]);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!col_ok[j]) lost_cols.push_back(cols[j]);
  }
  return out;
}

// Sorted greedy pairing for large inputs: each left value takes the closest
// unmatched right value within tol, scanning only the re-window. If that
// leaves anything unmatched, a verification pass searches for augmenting
// paths over the within-tol pairs, so the final matching has maximum size.
MultisetDiff diff_by_greedy(std::span<const Complex> x,
                            std::span<const Complex> y, double tol) {
  std::vector<Complex> left(x.begin(), x.end());
  std::vector<Complex> right(y.begin(), y.end());
  std::sort(left.begin(), left.end(), value_less);
  std::sort(right.begin(), right.end(), value_less);
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> mate_of_left(left.size(), kFree);
  std::vector<std::size_t> mate_of_right(right.size(), kFree);

  auto window = [&](const Complex& a) {
    const auto lo = std::lower_bound(right.begin(), right.end(), a.real() - tol,
                                     [](const Complex& z, double re) { return z.real() < re; });
    return static_cast<std::size_t>(lo - right.begin());
  };
  auto in_window = [&](std::size_t j, const Complex& a) {
    return j < right.size() && right[j].real() <= a.real() + tol;
  };

  bool complete = true;
  for (std::size_t i = 0; i < left.size(); ++i) {
    std::size_t best = kFree;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = window(left[i]); in_window(j, left[i]); ++j) {
      if (mate_of_right[j] != kFree) continue;
      const double d = componentwise_distance(left[i], right[j]);
      if (d <= tol && d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == kFree) {
      complete = false;
    } else {
      mate_of_left[i] = best;
      mate_of_right[best] = i;
    }
  }

  if (!complete) {
    std::vector<std::size_t> parent(right.size());
    std::vector<std::size_t> seen(right.size(), kFree);
    for (std::size_t root = 0; root < left.size(); ++root) {
      if (mate_of_left[root] != kFree) continue;
      // Breadth-first search for an alternating path to a free right value.
      std::vector<std::size_t> queue = {root};
      std::size_t end = kFree;
      for (std::size_t q = 0; q < queue.size() && end == kFree; ++q) {
        const std::size_t i = queue[q];
        for (std::size_t j = window(left[i]); in_window(j, left[i]); ++j) {
          if (seen[j] == root || componentwise_distance(left[i], right[j]) > tol) continue;
          seen[j] = root;
          parent[j] = i;
          if (mate_of_right[j] == kFree) {
            end = j;
            break;
          }
          queue.push_back(mate_of_right[j]);
        }
      }
      for (std::size_t j = end; j != kFree;) {
        const std::size_t i = parent[j];
        const std::size_t next = mate_of_left[i];
        mate_of_left[i] = j;
        mate_of_right[j] = i;
        j = next;
      }
    }
  }

  MultisetDiff out;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (mate_of_left[i] == kFree) {
      out.only_left.push_back(left[i]);
    } else {
      out.max_pair_distance = std::max(
          out.max_pair_distance, componentwise_distance(left[i], right[mate_of_left[i]]));
    }
  }
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (mate_of_right[j] == kFree) out.only_right.push_back(right[j]);
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  out += buf;
}

}  // namespace

double componentwise_distance(Complex a, Complex b) {
  return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag()));
}

EigenMultiset EigenMultiset::from_values(std::span<const Complex> values,
                                         double tol) {
  std::vector<EigenEntry> items;
  items.reserve(values.size());
  for (const Complex& z : values) items.push_back({z, 1});
  return from_entries(items, tol);
}

EigenMultiset EigenMultiset::from_entries(std::span<const EigenEntry> entries,
                                          double tol) {
  if (!(tol >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "clustering tolerance must be >= 0");
  }
  EigenMultiset out;
  out.tol_ = tol;
  std::vector<EigenEntry> items;
  for (const EigenEntry& e : entries) {
    if (e.multiplicity > 0) items.push_back(e);
  }
  out.entries_ = cluster(std::move(items), tol);
  for (const EigenEntry& e : out.entries_) out.total_ += e.multiplicity;
  return out;
}

std::vector<Complex> EigenMultiset::expanded() const {
  std::vector<Complex> out;
  out.reserve(total_);
  for (const EigenEntry& e : entries_) out.insert(out.end(), e.multiplicity, e.value);
  return out;
}

Complex EigenMultiset::sum() const {
  Complex s{};
  for (const EigenEntry& e : entries_) s += e.value * static_cast<double>(e.multiplicity);
  return s;
}

Complex EigenMultiset::product() const {
  Complex p{1.0};
  for (const EigenEntry& e : entries_) {
    for (std::size_t k = 0; k < e.multiplicity; ++k) p *= e.value;
  }
  return p;
}

std::size_t EigenMultiset::multiplicity_of(Complex value, double tol) const {
  for (const EigenEntry& e : entries_) {
    if (componentwise_distance(e.value, value) <= tol) return e.multiplicity;
  }
  return 0;
}

EigenMultiset EigenMultiset::merged(const EigenMultiset& other) const {
  std::vector<EigenEntry> all(entries_.begin(), entries_.end());
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  return from_entries(all, std::max(tol_, other.tol_));
}

MultisetDiff eigen_values_diff(std::span<const Complex> x,
                               std::span<const Complex> y, double tol) {
  MultisetDiff out = std::max(x.size(), y.size()) <= kHungarianLimit
                         ? diff_by_hungarian(x, y, tol)
                         : diff_by_greedy(x, y, tol);
  std::sort(out.only_left.begin(), out.only_left.end(), value_less);
  std::sort(out.only_right.begin(), out.only_right.end(), value_less);
  out.equal = out.only_left.empty() && out.only_right.empty();
  return out;
}

MultisetDiff eigen_multiset_diff(const EigenMultiset& x, const EigenMultiset& y,
                                 double tol) {
  const auto a = x.expanded();
  const auto b = y.expanded();
  return eigen_values_diff(a, b, tol);
}

bool eigen_multiset_equal(const EigenMultiset& x, const EigenMultiset& y,
                          double tol) {
  return x.total() == y.total() && eigen_multiset_diff(x, y, tol).equal;
}

std::string to_csv(const EigenMultiset& s) {
  std::string out = "re,im,multiplicity\n";
  for (const EigenEntry& e : s.entries()) {
    append_number(out, e.value.real());
    out += ',';
    append_number(out, e.value.imag());
    out += ',';
    out += std::to_string(e.multiplicity);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const EigenMultiset& s) {
  nlohmann::json values = nlohmann::json::array();
  for (const EigenEntry& e : s.entries()) {
    values.push_back({{"re", e.value.real() == 0.0 ? 0.0 : e.value.real()},
                      {"im", e.value.imag() == 0.0 ? 0.0 : e.value.imag()},
                      {"multiplicity", e.multiplicity}});
  }
  return {{"tolerance", s.tolerance()},
          {"total", s.total()},
          {"eigenvalues", std::move(values)}};
}

}  // namespace wreath

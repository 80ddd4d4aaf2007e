#include "wreath/graphs.hpp"

#include <cmath>
#include <string>

#include "wreath/eigensolver.hpp"
#include "wreath/wreath_product.hpp"

namespace wreath {

namespace {

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

Graph::Graph(std::vector<std::string> labels, std::vector<Edge> edges,
             std::optional<std::size_t> declared_degree, bool allow_self_loops)
    : labels_(std::move(labels)),
      edges_(std::move(edges)),
      degrees_(labels_.size(), 0),
      allow_self_loops_(allow_self_loops) {
  const std::size_t n = labels_.size();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.u >= n || edge.v >= n) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "edge " + std::to_string(e) + " references a vertex outside 0.." +
                      std::to_string(n == 0 ? 0 : n - 1));
    }
    if (edge.u == edge.v) {
      if (!allow_self_loops_) {
        throw Error(ErrorKind::kInvalidArgument,
                    "edge " + std::to_string(e) + " is a self-loop");
      }
      ++degrees_[edge.u];
    } else {
      ++degrees_[edge.u];
      ++degrees_[edge.v];
    }
  }
  if (declared_degree) {
    for (std::size_t v = 0; v < n; ++v) {
      if (degrees_[v] != *declared_degree) {
        throw Error(ErrorKind::kNonRegular,
                    "vertex " + std::to_string(v) + " has degree " +
                        std::to_string(degrees_[v]) + ", declared " +
                        std::to_string(*declared_degree));
      }
    }
  }
}

Graph Graph::complete(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return Graph(index_labels(n), std::move(edges), n - 1);
}

Graph Graph::cycle(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::kInvalidArgument, "cycle graph needs n >= 3");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(index_labels(n), std::move(edges), 2);
}

std::optional<std::size_t> Graph::regular_degree() const {
  if (degrees_.empty()) return std::nullopt;
  for (std::size_t d : degrees_) {
    if (d != degrees_.front()) return std::nullopt;
  }
  return degrees_.front();
}

std::size_t Graph::require_regular() const {
  const auto d = regular_degree();
  if (!d) throw Error(ErrorKind::kNonRegular, "graph is not regular");
  return *d;
}

DenseMatrix adjacency_matrix(const Graph& g) {
  DenseMatrix a(g.order(), g.order());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) += 1.0;
    if (e.u != e.v) a(e.v, e.u) += 1.0;
  }
  return a;
}

SparseMatrix adjacency_sparse(const Graph& g) {
  std::vector<Triple> t;
  t.reserve(2 * g.edge_count());
  for (const Edge& e : g.edges()) {
    t.push_back({e.u, e.v, 1.0});
    if (e.u != e.v) t.push_back({e.v, e.u, 1.0});
  }
  return SparseMatrix(g.order(), g.order(), std::move(t));
}

DenseMatrix normalized_adjacency(const Graph& g) {
  const std::size_t d = g.require_regular();
  if (d == 0) return DenseMatrix(g.order(), g.order());
  return scale(adjacency_matrix(g), 1.0 / static_cast<double>(d));
}

std::size_t lamp_vertex_index(std::span<const std::size_t> config,
                              std::size_t position, std::size_t n2) {
  std::size_t rank = 0;
  for (std::size_t c : config) rank = rank * n2 + c;
  return rank * config.size() + position;
}

LampVertex lamp_vertex_at(std::size_t index, std::size_t n1, std::size_t n2) {
  LampVertex out;
  out.position = index % n1;
  std::size_t rank = index / n1;
  out.config.assign(n1, 0);
  for (std::size_t i = n1; i-- > 0;) {
    out.config[i] = rank % n2;
    rank /= n2;
  }
  return out;
}

Graph graph_wreath(const Graph& g1, const Graph& g2, const Limits& limits) {
  const std::size_t n1 = g1.order();
  const std::size_t n2 = g2.order();
  if (n1 == 0 || n2 == 0) {
    throw Error(ErrorKind::kInvalidArgument, "wreath product needs nonempty graphs");
  }
  const std::uint64_t configs = checked_pow(n2, n1, limits.sparse_order);
  const std::size_t total = checked_mul(configs, n1, limits.sparse_order);

  std::vector<std::size_t> weight(n1);
  {
    std::size_t w = 1;
    for (std::size_t i = n1; i-- > 0;) {
      weight[i] = w;
      w *= n2;
    }
  }

  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<Edge> edges;
  std::vector<std::size_t> f(n1, 0);
  for (std::size_t r = 0; r < configs; ++r) {
    std::string lamps;
    for (std::size_t c : f) lamps += g2.labels()[c];
    for (std::size_t v = 0; v < n1; ++v) {
      labels.push_back(lamps + "," + g1.labels()[v]);
      // Switch: the lamp at v moves along each G2 edge leaving f(v).
      for (const Edge& e : g2.edges()) {
        if (e.u != f[v]) continue;
        const std::size_t r2 = r - e.u * weight[v] + e.v * weight[v];
        edges.push_back({r * n1 + v, r2 * n1 + v});
      }
    }
    // Walk: configuration fixed, position moves along G1.
    for (const Edge& e : g1.edges()) edges.push_back({r * n1 + e.u, r * n1 + e.v});
    for (std::size_t h = n1; h-- > 0;) {
      if (++f[h] < n2) break;
      f[h] = 0;
    }
  }

  std::optional<std::size_t> degree;
  const auto d1 = g1.regular_degree();
  const auto d2 = g2.regular_degree();
  if (d1 && d2) degree = *d1 + *d2;
  return Graph(std::move(labels), std::move(edges), degree,
               g1.allows_self_loops() || g2.allows_self_loops());
}

SparseMatrix lamplighter_transition(const Graph& g1, const Graph& g2,
                                    const Limits& limits) {
  const std::size_t d1 = g1.require_regular();
  const std::size_t d2 = g2.require_regular();
  if (d1 + d2 == 0) {
    throw Error(ErrorKind::kInvalidArgument, "lamplighter walk needs d1 + d2 > 0");
  }
  const double total = static_cast<double>(d1 + d2);
  const DenseMatrix walk = scale(normalized_adjacency(g1), d1 / total);
  const DenseMatrix flip = scale(normalized_adjacency(g2), d2 / total);
  return wreath_product(walk, flip, limits);
}

DenseMatrix reduced_lamp_block(const Graph& g, std::span<const std::size_t> tuple) {
  const std::size_t d = g.require_regular();
  if (tuple.size() != g.order()) {
    throw Error(ErrorKind::kDimensionMismatch, "tuple length must equal |V|");
  }
  const double denom = static_cast<double>(d + 1);
  DenseMatrix out = scale(normalized_adjacency(g), static_cast<double>(d) / denom);
  for (std::size_t t = 0; t < tuple.size(); ++t) {
    if (tuple[t] > 1) {
      throw Error(ErrorKind::kIndexOutOfRange, "two-colour tuple entries must be 0 or 1");
    }
    out(t, t) += (tuple[t] == 0 ? 1.0 : -1.0) / denom;
  }
  return out;
}

std::vector<LampSpectrumPart> complete_lamplighter_spectrum(std::size_t n) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidArgument, "complete lamplighter spectrum needs n >= 2");
  }
  const double nd = static_cast<double>(n);
  std::vector<LampSpectrumPart> parts;
  parts.reserve(n + 1);

  auto add = [](std::vector<EigenEntry>& v, double value, std::size_t mult) {
    if (mult > 0) v.push_back({Complex(value, 0.0), mult});
  };

  for (std::size_t k = 0; k <= n; ++k) {
    LampSpectrumPart part;
    part.k = k;
    part.weight = binomial(n, k);
    if (k == 0) {
      add(part.values, 0.0, n - 1);
      add(part.values, 1.0, 1);
    } else if (k == n) {
      add(part.values, -2.0 / nd, n - 1);
      add(part.values, (nd - 2.0) / nd, 1);
    } else {
      const double disc = (nd + 2.0) * (nd + 2.0) - 8.0 * static_cast<double>(k);
      if (!(disc > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "non-positive discriminant");
      }
      add(part.values, -2.0 / nd, k - 1);
      add(part.values, 0.0, n - k - 1);
      add(part.values, (nd - 2.0 + std::sqrt(disc)) / (2.0 * nd), 1);
      add(part.values, (nd - 2.0 - std::sqrt(disc)) / (2.0 * nd), 1);
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

EigenMultiset lamp_parts_union(const std::vector<LampSpectrumPart>& parts,
                               double tol) {
  std::vector<EigenEntry> entries;
  for (const LampSpectrumPart& p : parts) {
    for (const EigenEntry& e : p.values) {
      entries.push_back({e.value, e.multiplicity * p.weight});
    }
  }
  return EigenMultiset::from_entries(entries, tol);
}

EigenMultiset lamp_spectrum_by_reduction(const Graph& g, double tol,
                                         const Limits& limits) {
  const std::size_t n = g.order();
  std::uint64_t count = 0;
  try {
    count = checked_pow(2, n, limits.enumeration);
  } catch (const Error&) {
    throw Error(ErrorKind::kEnumerationOverflow,
                "2^" + std::to_string(n) + " tuples exceed the enumeration cap");
  }
  std::vector<Complex> values;
  values.reserve(count * n);
  std::vector<std::size_t> tuple(n, 0);
  for (std::uint64_t p = 0; p < count; ++p) {
    const auto eig = block_eigenvalues(reduced_lamp_block(g, tuple));
    values.insert(values.end(), eig.begin(), eig.end());
    for (std::size_t h = n; h-- > 0;) {
      if (++tuple[h] < 2) break;
      tuple[h] = 0;
    }
  }
  return EigenMultiset::from_values(values, tol);
}

}  // namespace wreath

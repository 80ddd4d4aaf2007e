#pragma once

// Finite undirected graphs, their wreath (lamplighter) product and the
// "walk or switch" transition matrix.
//
// Vertices of G1 wr G2 are pairs (f, v) with f: V1 -> V2 a lamp
// configuration and v in V1 the lamplighter position. The flat index is
//
//   rank(f) * n1 + index(v),   rank(f) = sum_i f(v_i) * n2^(n1 - i)
//
// i.e. configurations outermost in lexicographic order with f(v_1) most
// significant, positions innermost. With this ordering the normalized
// adjacency of G1 wr G2 equals (d1/(d1+d2) A1) wr (d2/(d1+d2) A2) entrywise.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/eigen_multiset.hpp"
#include "wreath/tensor.hpp"

namespace wreath {

struct Edge {
  std::size_t u;
  std::size_t v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected multigraph. A self-loop adds 1 to its vertex's degree
/// and 1 to the diagonal adjacency entry, so normalized adjacency rows still
/// sum to 1.
class Graph {
 public:
  Graph() = default;
  /// Validates indices, rejects self-loops unless allowed, and checks the
  /// declared degree against every vertex (kNonRegular on failure).
  Graph(std::vector<std::string> labels, std::vector<Edge> edges,
        std::optional<std::size_t> declared_degree = std::nullopt,
        bool allow_self_loops = false);

  static Graph complete(std::size_t n);
  static Graph cycle(std::size_t n);
  /// The single edge K_2.
  static Graph segment() { return complete(2); }

  std::size_t order() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool allows_self_loops() const noexcept { return allow_self_loops_; }

  std::size_t degree_of(std::size_t v) const { return degrees_.at(v); }
  /// Common degree if every vertex has the same degree.
  std::optional<std::size_t> regular_degree() const;
  /// regular_degree() or kNonRegular.
  std::size_t require_regular() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degrees_;
  bool allow_self_loops_ = false;
};

/// Entry (i, j) counts the edges between i and j.
DenseMatrix adjacency_matrix(const Graph& g);
SparseMatrix adjacency_sparse(const Graph& g);
/// Adjacency divided by the degree; the zero matrix for a 0-regular graph.
DenseMatrix normalized_adjacency(const Graph& g);

/// Flat vertex index of (config, position) in G1 wr G2.
std::size_t lamp_vertex_index(std::span<const std::size_t> config,
                              std::size_t position, std::size_t n2);
struct LampVertex {
  std::vector<std::size_t> config;
  std::size_t position = 0;
};
LampVertex lamp_vertex_at(std::size_t index, std::size_t n1, std::size_t n2);

/// Switch edges (same position, lamp at the position moves along a G2 edge)
/// and walk edges (same configuration, position moves along a G1 edge).
/// Labels read "u_1u_2...u_n1,v".
Graph graph_wreath(const Graph& g1, const Graph& g2, const Limits& limits = {});

/// (d1/(d1+d2) A1) wr (d2/(d1+d2) A2) for regular g1, g2 with d1 + d2 > 0.
SparseMatrix lamplighter_transition(const Graph& g1, const Graph& g2,
                                    const Limits& limits = {});

/// The order-|V| reduced block for two lamp colours:
/// d/(d+1) A + 1/(d+1) sum_t (-1)^(i_t) C_t.
DenseMatrix reduced_lamp_block(const Graph& g, std::span<const std::size_t> tuple);

struct LampSpectrumPart {
  std::size_t k = 0;               // lamps switched on in the tuple
  std::vector<EigenEntry> values;  // exact multiplicities, real values
  std::uint64_t weight = 1;        // binomial(n, k)
};

/// Closed-form spectrum of the two-colour lamplighter walk on K_n, one part
/// per lamps-on count k = 0..n. Requires n >= 2.
std::vector<LampSpectrumPart> complete_lamplighter_spectrum(std::size_t n);

/// Weighted union of the parts.
EigenMultiset lamp_parts_union(const std::vector<LampSpectrumPart>& parts,
                               double tol = kDefaultClusterTol);

/// Spectrum of the two-colour transition matrix on regular g through all
/// 2^|V| reduced lamp blocks.
EigenMultiset lamp_spectrum_by_reduction(const Graph& g,
                                         double tol = kDefaultClusterTol,
                                         const Limits& limits = {});

// Graph JSON: {"n": int, "labels": [...], "edges": [[i, j], ...],
//              "degree": int|null}. "self_loops": true is optional.
nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j, const std::string& where = "graph");
/// Undirected DOT with quoted vertex labels.
std::string to_dot(const Graph& g, const std::string& name = "G");

}  // namespace wreath

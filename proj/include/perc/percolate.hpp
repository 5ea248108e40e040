#ifndef PERC_PERCOLATE_HPP
#define PERC_PERCOLATE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "perc/graphs.hpp"

namespace perc {

using GraphPtr = std::shared_ptr<const Graph>;

inline GraphPtr make_graph(const GraphSpec& spec) { return std::make_shared<const Graph>(spec); }

/// One sampled bond configuration. Only open bonds are stored (ascending by
/// canonical edge index, endpoints resolved); the full bitset is available
/// through is_open() and to_hex().
struct BondConfig {
  GraphPtr graph;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::int64_t replicate = 0;
  std::vector<Edge> open;

  const GraphSpec& spec() const { return graph->spec(); }
  Index vertex_count() const { return graph->vertex_count(); }
  bool is_open(EdgeIndex e) const;

  /// Occupied-edge bitmask as hex, most significant nibble first; bit i is
  /// canonical edge i. Debug output only.
  std::string to_hex() const;

  /// Builds a configuration with exactly the given edges open.
  static BondConfig from_open_edges(GraphPtr graph, std::vector<EdgeIndex> edges);
};

/// Bernoulli(p) bond sample. Output is a pure function of
/// (spec, p, seed, replicate).
///
/// Product families key a uniform by (seed, replicate, edge index) and open
/// the edge iff it is below p, which couples samples monotonically in p.
/// Complete-like families have O(n^2) candidate bonds and instead draw
/// geometric gaps within fixed blocks of 2^16 edges, keyed by
/// (seed, replicate, block).
BondConfig sample_bonds(GraphPtr graph, double p, std::uint64_t seed, std::int64_t replicate);
BondConfig sample_bonds(const GraphSpec& spec, double p, std::uint64_t seed, std::int64_t replicate);

/// Union-find with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(Index n);
  Index find(Index x);
  bool unite(Index a, Index b);
  Index size(Index x) { return size_[static_cast<std::size_t>(find(x))]; }

 private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

/// Component structure of a configuration. Each component is represented by
/// its smallest vertex.
struct ClusterLabeling {
  std::vector<Vertex> root;
  std::vector<Index> size_of;       // valid at root indices
  std::vector<Index> sizes_sorted;  // nonincreasing
  std::vector<Vertex> ranked_roots; // rank 1 first; ties by smaller root

  Index vertex_count() const { return static_cast<Index>(root.size()); }
  Index cluster_count() const { return static_cast<Index>(sizes_sorted.size()); }
  Index cluster_size(Vertex v) const { return size_of[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])]; }
  Index cmax() const { return sizes_sorted.empty() ? 0 : sizes_sorted.front(); }
  bool connected(Vertex u, Vertex v) const { return root[static_cast<std::size_t>(u)] == root[static_cast<std::size_t>(v)]; }
  /// Size of the i-th largest cluster (1-based), 0 if there are fewer.
  Index ranked_size(Index i) const;
};

ClusterLabeling cluster(const BondConfig& config);

/// #{v : |C(v)| >= k}.
Index z_geq(const ClusterLabeling& labeling, Index k);

/// Sum over clusters of |C|^2, i.e. V times the all-vertex mean of |C(v)|.
double sum_squared_sizes(const ClusterLabeling& labeling);

/// A cluster viewed as a graph: the vertices and the open edges between them.
/// Adjacency is CSR over local indices 0..size()-1, local order = ascending
/// global index.
struct ClusterSubgraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> open_edges;
  std::vector<Index> adj_offsets;
  std::vector<Index> adj;

  Index size() const { return static_cast<Index>(vertices.size()); }
  Index edge_count() const { return static_cast<Index>(open_edges.size()); }
  Index local_degree(Index x) const { return adj_offsets[x + 1] - adj_offsets[x]; }
  /// Local index of a global vertex, or nullopt if it is not in the cluster.
  std::optional<Index> local_index(Vertex v) const;

  /// Builds a subgraph from global vertices and edges; edges must be internal.
  static ClusterSubgraph from_edges(std::vector<Vertex> vertices, std::vector<Edge> edges);
};

struct ByVertex { Vertex v; };
struct ByRank { Index rank; };  // 1-based
using ClusterSelector = std::variant<ByVertex, ByRank>;

ClusterSubgraph extract_cluster(const BondConfig& config, const ClusterLabeling& labeling,
                                ClusterSelector selector);
ClusterSubgraph extract_cluster(const BondConfig& config, ClusterSelector selector);

}  // namespace perc

#endif  // PERC_PERCOLATE_HPP

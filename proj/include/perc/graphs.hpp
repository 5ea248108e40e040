#ifndef PERC_GRAPHS_HPP
#define PERC_GRAPHS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perc {

using Index = std::int64_t;
using Vertex = Index;
using EdgeIndex = Index;

enum class Family { TorusNN, TorusSpread, Hypercube, Hamming, Complete, ErdosRenyi };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Declarative description of one graph instance. Which fields matter depends
/// on the family: tori use (d, r) and TorusSpread also L; Hypercube uses d;
/// Hamming uses (d, r); Complete and ErdosRenyi use n.
struct GraphSpec {
  Family family = Family::TorusNN;
  int d = 1;
  int r = 3;
  int L = 1;
  Index n = 0;

  static GraphSpec torus_nn(int d, int r) { return {Family::TorusNN, d, r, 1, 0}; }
  static GraphSpec torus_spread(int d, int r, int L) { return {Family::TorusSpread, d, r, L, 0}; }
  static GraphSpec hypercube(int d) { return {Family::Hypercube, d, 2, 1, 0}; }
  static GraphSpec hamming(int d, int r) { return {Family::Hamming, d, r, 1, 0}; }
  static GraphSpec complete(Index n) { return {Family::Complete, 1, 0, 1, n}; }
  static GraphSpec erdos_renyi(Index n) { return {Family::ErdosRenyi, 1, 0, 1, n}; }

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

/// Throws Error(InvalidSpec) unless the family's invariants hold.
void validate(const GraphSpec& spec);

Index vertex_count(const GraphSpec& spec);

/// Vertex degree. ErdosRenyi is not regular before sampling and throws.
Index degree(const GraphSpec& spec);

/// Degree of the graph bonds are drawn from: equals degree() except for
/// ErdosRenyi, where it is the complete-graph degree n-1.
Index underlying_degree(const GraphSpec& spec);

/// Number of candidate bonds, V*Omega/2 (n(n-1)/2 for Complete/ErdosRenyi).
Index edge_count(const GraphSpec& spec);

/// The mean-field results need d > 6; lower-dimensional tori are accepted but flagged.
bool theory_out_of_range(const GraphSpec& spec);
bool calibration_only(const GraphSpec& spec);

/// Number of coordinates and the radix of each coordinate.
int coordinate_count(const GraphSpec& spec);
Index coordinate_radix(const GraphSpec& spec);

/// Coordinates of product families live in {-floor(r/2), ..., ceil(r/2)-1};
/// Complete and ErdosRenyi use the single coordinate {0, ..., n-1}.
std::vector<int> decode(const GraphSpec& spec, Vertex v);
Vertex encode(const GraphSpec& spec, const std::vector<int>& coords);

/// The vertex with all coordinates zero (index 0 for Complete/ErdosRenyi).
Vertex origin(const GraphSpec& spec);

/// Neighbours of v in ascending index order.
std::vector<Vertex> neighbors(const GraphSpec& spec, Vertex v);

struct Edge {
  EdgeIndex index;
  Vertex u;  // u < v
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Canonical enumeration: lexicographic in (min endpoint, max endpoint).
std::vector<Edge> edge_list(const GraphSpec& spec);

/// Indexing helper over a validated spec. Holds the per-vertex edge offsets
/// of the canonical order so edge index <-> endpoints is cheap.
class Graph {
 public:
  explicit Graph(const GraphSpec& spec);

  const GraphSpec& spec() const noexcept { return spec_; }
  Index vertex_count() const noexcept { return vertices_; }
  Index edge_count() const noexcept { return edges_; }
  Index degree() const noexcept { return degree_; }

  /// Number of canonical edges whose smaller endpoint is below u.
  EdgeIndex edges_before(Vertex u) const;

  /// Neighbours of u with index greater than u, ascending.
  void upper_neighbors(Vertex u, std::vector<Vertex>& out) const;
  void all_neighbors(Vertex u, std::vector<Vertex>& out) const;

  std::pair<Vertex, Vertex> endpoints(EdgeIndex e) const;

  /// Resolves endpoints for an ascending list of edge indices; faster than
  /// calling endpoints() per edge because it walks the offsets once.
  template <typename Fn>
  void for_each_endpoints(const std::vector<EdgeIndex>& sorted_edges, Fn&& fn) const;

 private:
  bool complete_like() const noexcept;

  GraphSpec spec_;
  Index vertices_ = 0;
  Index edges_ = 0;
  Index degree_ = 0;
  std::vector<Index> radix_pow_;
  std::vector<EdgeIndex> offsets_;  // empty for complete-like families
};

template <typename Fn>
void Graph::for_each_endpoints(const std::vector<EdgeIndex>& sorted_edges, Fn&& fn) const {
  if (complete_like()) {
    for (EdgeIndex e : sorted_edges) {
      auto [u, v] = endpoints(e);
      fn(e, u, v);
    }
    return;
  }
  std::vector<Vertex> upper;
  Vertex u = -1;
  for (EdgeIndex e : sorted_edges) {
    if (u < 0 || e >= offsets_[static_cast<std::size_t>(u) + 1]) {
      Vertex next = u + 1;
      while (offsets_[static_cast<std::size_t>(next) + 1] <= e) ++next;
      u = next;
      upper_neighbors(u, upper);
    }
    fn(e, u, upper[static_cast<std::size_t>(e - offsets_[static_cast<std::size_t>(u)])]);
  }
}

}  // namespace perc

#endif  // PERC_GRAPHS_HPP

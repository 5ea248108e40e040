#include "perc/percolate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "perc/error.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

constexpr EdgeIndex kBlockEdges = EdgeIndex{1} << 20;

bool complete_like(const GraphSpec& s) {
  return s.family == Family::Complete || s.family == Family::ErdosRenyi;
}

// Edge e is open iff the e-th SplitMix64 output of the replicate stream,
// read as a 53-bit uniform, is below p. Endpoints are resolved per vertex.
std::vector<Edge> sample_per_edge(const Graph& g, double p, std::uint64_t key) {
  std::vector<Edge> out;
  if (p <= 0.0) return out;
  const double threshold = p * 0x1.0p53;
  out.reserve(static_cast<std::size_t>(static_cast<double>(g.edge_count()) * std::min(p, 1.0) * 1.05) + 16);
  std::vector<Vertex> upper;
  std::vector<EdgeIndex> hits;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    const EdgeIndex first = g.edges_before(u), last = g.edges_before(u + 1);
    hits.clear();
    for (EdgeIndex e = first; e < last; ++e) {
      const std::uint64_t h = mix64(key + static_cast<std::uint64_t>(e) * 0x9e3779b97f4a7c15ULL);
      if (static_cast<double>(h >> 11) < threshold) hits.push_back(e);
    }
    if (hits.empty()) continue;
    g.upper_neighbors(u, upper);
    for (EdgeIndex e : hits) out.push_back({e, u, upper[static_cast<std::size_t>(e - first)]});
  }
  return out;
}

// Each edge carries a uniform U_e split into dyadic bands: band j < kLevels
// holds U in [2^-j, 2^-j+1), the last band holds [0, 2^-(kLevels-1)). Bands
// are drawn deepest first by geometric skipping over the positions not yet
// claimed, keyed by (seed, replicate, block, band), so the set {U_e < p} is
// enumerated in O(p E) work and is nested in p.
constexpr int kLevels = 64;

std::vector<EdgeIndex> sample_banded(const Graph& g, double p, std::uint64_t seed, std::int64_t replicate) {
  std::vector<EdgeIndex> out;
  if (p <= 0.0) return out;
  const EdgeIndex E = g.edge_count();
  if (p >= 1.0) {
    out.resize(static_cast<std::size_t>(E));
    std::iota(out.begin(), out.end(), EdgeIndex{0});
    return out;
  }
  int exponent = 0;
  std::frexp(p, &exponent);
  const int band_of_p = std::min(kLevels, 1 - exponent);  // p lies in this band
  const std::uint64_t rep_key = hash_key(seed, static_cast<std::uint64_t>(replicate));

  std::vector<EdgeIndex> taken, fresh, merged;
  for (EdgeIndex block = 0; block * kBlockEdges < E; ++block) {
    const EdgeIndex begin = block * kBlockEdges;
    const EdgeIndex len = std::min(kBlockEdges, E - begin);
    const std::uint64_t block_key = hash_key(rep_key, static_cast<std::uint64_t>(block));
    taken.clear();
    for (int j = kLevels; j >= band_of_p; --j) {
      const double lo = j == kLevels ? 0.0 : std::ldexp(1.0, -j);
      const double width = std::ldexp(1.0, -(j == kLevels ? kLevels - 1 : j));
      // P(band j | U >= lo)
      const double rate = j == kLevels ? width : width / (1.0 - lo);
      const double log_q = rate < 1.0 ? std::log1p(-rate) : 0.0;
      CounterRng rng(hash_key(block_key, static_cast<std::uint64_t>(j)));
      fresh.clear();
      double pos = -1.0;
      auto t = taken.begin();
      while (true) {
        pos += rate < 1.0 ? std::floor(std::log(rng.uniform_open0()) / log_q) + 1.0 : 1.0;
        if (pos >= static_cast<double>(len)) break;
        const auto x = static_cast<EdgeIndex>(pos);
        while (t != taken.end() && *t < x) ++t;
        if (t != taken.end() && *t == x) continue;
        if (j == band_of_p) {
          const double u = static_cast<double>(mix64(hash_key(block_key, static_cast<std::uint64_t>(x))) >> 11) * 0x1.0p-53;
          if (lo + width * u >= p) continue;
        }
        fresh.push_back(x);
      }
      merged.resize(taken.size() + fresh.size());
      std::merge(taken.begin(), taken.end(), fresh.begin(), fresh.end(), merged.begin());
      std::swap(taken, merged);
    }
    for (EdgeIndex x : taken) out.push_back(begin + x);
  }
  return out;
}

}  // namespace

bool BondConfig::is_open(EdgeIndex e) const {
  auto it = std::lower_bound(open.begin(), open.end(), e,
                             [](const Edge& a, EdgeIndex b) { return a.index < b; });
  return it != open.end() && it->index == e;
}

std::string BondConfig::to_hex() const {
  const EdgeIndex E = graph->edge_count();
  const std::size_t nibbles = static_cast<std::size_t>((E + 3) / 4);
  std::vector<unsigned> value(std::max<std::size_t>(nibbles, 1), 0);
  for (const Edge& e : open) value[static_cast<std::size_t>(e.index / 4)] |= 1u << (e.index % 4);
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = value.size(); i-- > 0;) out.push_back(kDigits[value[i]]);
  return out;
}

BondConfig BondConfig::from_open_edges(GraphPtr graph, std::vector<EdgeIndex> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (EdgeIndex e : edges)
    require(e >= 0 && e < graph->edge_count(), ErrorCode::InvalidArgument, "edge index out of range");
  BondConfig config;
  config.graph = std::move(graph);
  config.open.reserve(edges.size());
  config.graph->for_each_endpoints(edges, [&](EdgeIndex e, Vertex u, Vertex v) {
    config.open.push_back({e, u, v});
  });
  return config;
}

BondConfig sample_bonds(GraphPtr graph, double p, std::uint64_t seed, std::int64_t replicate) {
  check_probability(p);
  BondConfig config;
  if (complete_like(graph->spec())) {
    const std::vector<EdgeIndex> edges = sample_banded(*graph, p, seed, replicate);
    config.open.reserve(edges.size());
    graph->for_each_endpoints(edges, [&](EdgeIndex e, Vertex u, Vertex v) { config.open.push_back({e, u, v}); });
  } else {
    config.open = sample_per_edge(*graph, p, hash_key(seed, static_cast<std::uint64_t>(replicate)));
  }
  config.graph = std::move(graph);
  config.p = p;
  config.seed = seed;
  config.replicate = replicate;
  return config;
}

BondConfig sample_bonds(const GraphSpec& spec, double p, std::uint64_t seed, std::int64_t replicate) {
  check_probability(p);
  return sample_bonds(make_graph(spec), p, seed, replicate);
}

// --- union-find --------------------------------------------------------------

UnionFind::UnionFind(Index n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
  std::iota(parent_.begin(), parent_.end(), Index{0});
}

Index UnionFind::find(Index x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(Index a, Index b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

// --- labeling -----------------------------------------------------------------

Index ClusterLabeling::ranked_size(Index i) const {
  return i >= 1 && i <= cluster_count() ? sizes_sorted[static_cast<std::size_t>(i - 1)] : 0;
}

ClusterLabeling cluster(const BondConfig& config) {
  const Index V = config.vertex_count();
  UnionFind uf(V);
  for (const Edge& e : config.open) uf.unite(e.u, e.v);

  ClusterLabeling out;
  out.root.assign(static_cast<std::size_t>(V), -1);
  out.size_of.assign(static_cast<std::size_t>(V), 0);
  // uf representative -> canonical (smallest) vertex of that component
  std::vector<Vertex> canonical(static_cast<std::size_t>(V), -1);
  for (Vertex v = 0; v < V; ++v) {
    Index rep = uf.find(v);
    if (canonical[rep] < 0) {
      canonical[rep] = v;
      out.ranked_roots.push_back(v);
      out.size_of[v] = uf.size(rep);
    }
    out.root[v] = canonical[rep];
  }
  // Counting sort by decreasing size; roots arrive in increasing order, so
  // ties stay ordered by the smaller root.
  Index largest = 0;
  for (Vertex r : out.ranked_roots) largest = std::max(largest, out.size_of[r]);
  std::vector<Index> start(static_cast<std::size_t>(largest) + 2, 0);
  for (Vertex r : out.ranked_roots) ++start[static_cast<std::size_t>(largest - out.size_of[r]) + 1];
  for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
  std::vector<Vertex> ranked(out.ranked_roots.size());
  for (Vertex r : out.ranked_roots) ranked[static_cast<std::size_t>(start[static_cast<std::size_t>(largest - out.size_of[r])]++)] = r;
  out.ranked_roots = std::move(ranked);
  out.sizes_sorted.reserve(out.ranked_roots.size());
  for (Vertex r : out.ranked_roots) out.sizes_sorted.push_back(out.size_of[r]);
  return out;
}

Index z_geq(const ClusterLabeling& labeling, Index k) {
  Index z = 0;
  for (Index s : labeling.sizes_sorted) {
    if (s < k) break;
    z += s;
  }
  return z;
}

double sum_squared_sizes(const ClusterLabeling& labeling) {
  double total = 0.0;
  for (Index s : labeling.sizes_sorted) total += static_cast<double>(s) * static_cast<double>(s);
  return total;
}

// --- subgraphs ---------------------------------------------------------------

std::optional<Index> ClusterSubgraph::local_index(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) return std::nullopt;
  return static_cast<Index>(it - vertices.begin());
}

ClusterSubgraph ClusterSubgraph::from_edges(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  ClusterSubgraph c;
  std::sort(vertices.begin(), vertices.end());
  c.vertices = std::move(vertices);
  c.open_edges = std::move(edges);
  const std::size_t n = c.vertices.size();
  c.adj_offsets.assign(n + 1, 0);
  std::vector<std::pair<Index, Index>> local;
  local.reserve(c.open_edges.size());
  for (const Edge& e : c.open_edges) {
    auto a = c.local_index(e.u);
    auto b = c.local_index(e.v);
    require(a && b, ErrorCode::InvalidArgument, "edge endpoint outside cluster");
    local.emplace_back(*a, *b);
    ++c.adj_offsets[*a + 1];
    ++c.adj_offsets[*b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) c.adj_offsets[i + 1] += c.adj_offsets[i];
  c.adj.resize(static_cast<std::size_t>(c.adj_offsets[n]));
  std::vector<Index> fill(c.adj_offsets.begin(), c.adj_offsets.end() - 1);
  for (auto [a, b] : local) {
    c.adj[fill[a]++] = b;
    c.adj[fill[b]++] = a;
  }
  return c;
}

ClusterSubgraph extract_cluster(const BondConfig& config, const ClusterLabeling& labeling,
                                ClusterSelector selector) {
  Vertex root = -1;
  if (auto* by_vertex = std::get_if<ByVertex>(&selector)) {
    require(by_vertex->v >= 0 && by_vertex->v < labeling.vertex_count(), ErrorCode::VertexOutOfRange,
            "vertex " + std::to_string(by_vertex->v));
    root = labeling.root[by_vertex->v];
  } else {
    Index rank = std::get<ByRank>(selector).rank;
    require(rank >= 1 && rank <= labeling.cluster_count(), ErrorCode::RankOutOfRange,
            "rank " + std::to_string(rank) + " of " + std::to_string(labeling.cluster_count()));
    root = labeling.ranked_roots[rank - 1];
  }
  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>(labeling.size_of[root]));
  for (Vertex v = root; v < labeling.vertex_count(); ++v)
    if (labeling.root[v] == root) vertices.push_back(v);
  std::vector<Edge> edges;
  for (const Edge& e : config.open)
    if (labeling.root[e.u] == root) edges.push_back(e);
  return ClusterSubgraph::from_edges(std::move(vertices), std::move(edges));
}

ClusterSubgraph extract_cluster(const BondConfig& config, ClusterSelector selector) {
  return extract_cluster(config, cluster(config), selector);
}

}  // namespace perc

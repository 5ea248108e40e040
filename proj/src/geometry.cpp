#include "perc/geometry.hpp"

#include <algorithm>
#include <deque>

#include "perc/error.hpp"
#include "perc/estimators.hpp"

namespace perc {

Index DistanceField::eccentricity() const {
  return dist.empty() ? 0 : *std::max_element(dist.begin(), dist.end());
}

std::pair<Index, Index> bfs_local(const ClusterSubgraph& c, Index source, std::vector<Index>& dist) {
  const auto n = static_cast<std::size_t>(c.size());
  dist.assign(n, -1);
  std::vector<Index> queue(n);
  std::size_t head = 0, tail = 0;
  queue[tail++] = source;
  dist[source] = 0;
  Index far = source;
  while (head < tail) {
    const Index x = queue[head++];
    for (Index j = c.adj_offsets[x]; j < c.adj_offsets[x + 1]; ++j) {
      const Index y = c.adj[j];
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue[tail++] = y;
        if (dist[y] > dist[far]) far = y;
      }
    }
  }
  return {dist[far], far};
}

DistanceField bfs(const ClusterSubgraph& c, Vertex source) {
  auto local = c.local_index(source);
  require(local.has_value(), ErrorCode::VertexNotInCluster, "vertex " + std::to_string(source));
  DistanceField field;
  field.source = source;
  bfs_local(c, *local, field.dist);
  return field;
}

DiameterResult diameter(const ClusterSubgraph& c, Index exact_threshold) {
  DiameterResult out;
  if (c.size() <= 1) return out;
  std::vector<Index> dist;
  if (c.size() <= exact_threshold) {
    out.method = DiameterMethod::AllPairsBFS;
    out.exact = true;
    for (Index s = 0; s < c.size(); ++s) out.value = std::max(out.value, bfs_local(c, s, dist).first);
    return out;
  }
  out.method = DiameterMethod::DoubleSweepLowerBound;
  out.exact = false;
  // Repeated sweeps from the farthest vertex found so far, while they improve.
  Index start = 0;
  for (int sweep = 0; sweep < 8; ++sweep) {
    auto [ecc, far] = bfs_local(c, start, dist);
    if (sweep > 0 && ecc <= out.value) break;
    out.value = std::max(out.value, ecc);
    start = far;
  }
  return out;
}

std::vector<Index> ball_growth(const ClusterSubgraph& c, Vertex v, Index kmax) {
  require(kmax >= 0, ErrorCode::InvalidArgument, "kmax must be nonnegative");
  DistanceField field = bfs(c, v);
  std::vector<Index> counts(static_cast<std::size_t>(kmax) + 1, 0);
  for (const Edge& e : c.open_edges) {
    const Index reach = std::max(field.dist[*c.local_index(e.u)], field.dist[*c.local_index(e.v)]);
    if (reach <= kmax) ++counts[reach];
  }
  for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
  return counts;
}

Estimate arm_probability(const GraphSpec& spec, double p, Index k, std::int64_t replicates,
                         std::uint64_t seed) {
  check_probability(p);
  require(k >= 0, ErrorCode::InvalidArgument, "k must be nonnegative");
  require(replicates >= 1, ErrorCode::InvalidArgument, "need at least one replicate");
  const Vertex o = origin(spec);
  auto hits = map_replicates<double>(make_graph(spec), p, seed, 0, replicates,
                                     [&](const BondConfig& config, const ClusterLabeling& labeling) {
                                       if (k == 0) return 1.0;
                                       if (labeling.cluster_size(o) <= k) return 0.0;
                                       // Distances in a cluster are contiguous, so some vertex sits
                                       // at distance exactly k iff the eccentricity reaches k.
                                       ClusterSubgraph c = extract_cluster(config, labeling, ByVertex{o});
                                       return bfs(c, o).eccentricity() >= k ? 1.0 : 0.0;
                                     });
  return mean_estimate(hits);
}

}  // namespace perc

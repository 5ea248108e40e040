#ifndef PERC_GEOMETRY_HPP
#define PERC_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "perc/percolate.hpp"
#include "perc/stats.hpp"

namespace perc {

/// Intrinsic (open-edge) distances from one vertex, indexed by local index.
struct DistanceField {
  Vertex source = 0;
  std::vector<Index> dist;

  Index eccentricity() const;
};

enum class DiameterMethod { AllPairsBFS, DoubleSweepLowerBound };

struct DiameterResult {
  Index value = 0;
  bool exact = true;
  DiameterMethod method = DiameterMethod::AllPairsBFS;
};

constexpr Index kDefaultExactDiameterThreshold = 5000;

/// BFS from a global vertex; throws VertexNotInCluster.
DistanceField bfs(const ClusterSubgraph& cluster, Vertex source);

/// Same, from a local index, writing into `dist` (resized). Returns the
/// eccentricity and the first local vertex attaining it.
std::pair<Index, Index> bfs_local(const ClusterSubgraph& cluster, Index source, std::vector<Index>& dist);

/// Exact all-pairs BFS when |C| <= exact_threshold, otherwise an iterated
/// double-sweep lower bound flagged exact = false.
DiameterResult diameter(const ClusterSubgraph& cluster, Index exact_threshold = kDefaultExactDiameterThreshold);

/// counts[k] = number of open edges with both endpoints within intrinsic
/// distance k of v, for k = 0..kmax.
std::vector<Index> ball_growth(const ClusterSubgraph& cluster, Vertex v, Index kmax);

/// P(exists u in C(0) with d_C(0,u) = k), from the origin.
Estimate arm_probability(const GraphSpec& spec, double p, Index k, std::int64_t replicates,
                         std::uint64_t seed);

}  // namespace perc

#endif  // PERC_GEOMETRY_HPP

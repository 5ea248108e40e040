#include <doctest.h>

#include "perc/error.hpp"
#include "perc/geometry.hpp"
#include "test_support.hpp"

using namespace perc;
using testing::make_cluster;

namespace {

ClusterSubgraph cycle(Index n) {
  testing::Pairs pairs;
  for (Index i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return make_cluster(n, pairs);
}

}  // namespace

TEST_CASE("bfs") {
  const auto single = make_cluster(1, {});
  CHECK(bfs(single, 0).dist == std::vector<Index>{0});
  CHECK(bfs(cycle(6), 0).eccentricity() == 3);
  const auto path = make_cluster(3, {{0, 1}, {1, 2}});
  CHECK(bfs(path, 0).dist == std::vector<Index>{0, 1, 2});
  CHECK_THROWS_AS(bfs(path, 7), Error);
}

TEST_CASE("diameter") {
  const auto single = diameter(make_cluster(1, {}));
  CHECK(single.value == 0);
  CHECK(single.exact);
  CHECK(diameter(cycle(6)).value == 3);
  const auto torus = extract_cluster(sample_bonds(GraphSpec::torus_nn(2, 4), 1.0, 1, 0), ByRank{1});
  const auto d = diameter(torus);
  CHECK(d.value == 4);
  CHECK(d.exact);
}

TEST_CASE("diameter matches Floyd-Warshall on random clusters") {
  int checked = 0;
  for (const auto& spec : {GraphSpec::torus_nn(2, 12), GraphSpec::torus_nn(3, 6), GraphSpec::complete(120)}) {
    const double p = spec.family == Family::Complete ? 1.2 / 119.0 : 0.55 / static_cast<double>(degree(spec)) * 2.0;
    for (int rep = 0; rep < 20; ++rep) {
      const auto config = sample_bonds(spec, p, 77, rep);
      const auto labeling = cluster(config);
      for (Index rank = 1; rank <= std::min<Index>(3, labeling.cluster_count()); ++rank) {
        const auto c = extract_cluster(config, labeling, ByRank{rank});
        if (c.size() > 200) continue;
        const auto d = diameter(c);
        CHECK(d.exact);
        CHECK(d.value == testing::floyd_diameter(c));
        // The sweep estimate never exceeds the truth.
        const auto lower = diameter(c, 0);
        CHECK_FALSE(lower.exact);
        CHECK(lower.value <= d.value);
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("ball growth") {
  const auto path = make_cluster(3, {{0, 1}, {1, 2}});
  const auto counts = ball_growth(path, 0, 3);
  CHECK(counts[0] == 0);
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 2);
  CHECK(counts[3] == 2);
}

TEST_CASE("arm probability") {
  const auto tri = GraphSpec::torus_nn(1, 3);
  CHECK(arm_probability(tri, 0.3, 0, 10, 1).value == 1.0);
  CHECK(arm_probability(GraphSpec::torus_nn(2, 5), 0.0, 1, 10, 1).value == 0.0);
  CHECK(arm_probability(tri, 0.5, 1, 20000, 1).agrees_with(0.75));
}

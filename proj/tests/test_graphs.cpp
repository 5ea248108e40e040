#include <doctest.h>

#include <algorithm>
#include <set>

#include "perc/error.hpp"
#include "perc/graphs.hpp"

using namespace perc;

TEST_CASE("degree of each family") {
  CHECK(degree(GraphSpec::torus_nn(7, 5)) == 14);
  CHECK(degree(GraphSpec::torus_spread(1, 7, 2)) == 4);
  CHECK(degree(GraphSpec::torus_spread(2, 5, 1)) == 8);
  CHECK(degree(GraphSpec::complete(4)) == 3);
  CHECK(degree(GraphSpec::hypercube(5)) == 5);
  CHECK(degree(GraphSpec::hamming(3, 4)) == 9);
  CHECK_THROWS_AS(degree(GraphSpec::erdos_renyi(10)), Error);
  CHECK(underlying_degree(GraphSpec::erdos_renyi(10)) == 9);
}

TEST_CASE("edge counts") {
  CHECK(edge_count(GraphSpec::torus_nn(1, 3)) == 3);
  CHECK(edge_count(GraphSpec::torus_nn(7, 5)) == 546875);
  CHECK(edge_count(GraphSpec::complete(4)) == 6);
  CHECK(edge_count(GraphSpec::hypercube(3)) == 12);
}

TEST_CASE("neighbours in coordinates") {
  const auto tri = GraphSpec::torus_nn(1, 3);
  std::vector<std::vector<int>> coords;
  for (Vertex v : neighbors(tri, origin(tri))) coords.push_back(decode(tri, v));
  std::sort(coords.begin(), coords.end());
  CHECK(coords == std::vector<std::vector<int>>{{-1}, {1}});

  const auto spread = GraphSpec::torus_spread(1, 7, 2);
  coords.clear();
  for (Vertex v : neighbors(spread, origin(spread))) coords.push_back(decode(spread, v));
  std::sort(coords.begin(), coords.end());
  CHECK(coords == std::vector<std::vector<int>>{{-2}, {-1}, {1}, {2}});

  const auto cube = GraphSpec::hypercube(3);
  const auto o = decode(cube, origin(cube));
  const auto ns = neighbors(cube, origin(cube));
  CHECK(ns.size() == 3);
  for (Vertex v : ns) {
    const auto c = decode(cube, v);
    int diff = 0;
    for (std::size_t i = 0; i < c.size(); ++i) diff += c[i] != o[i];
    CHECK(diff == 1);
  }
}

TEST_CASE("adjacency is symmetric, sorted and of the stated degree") {
  for (const auto& spec : {GraphSpec::torus_nn(3, 4), GraphSpec::torus_spread(2, 6, 2), GraphSpec::hypercube(4),
                           GraphSpec::hamming(2, 5), GraphSpec::complete(6)}) {
    const Index V = vertex_count(spec);
    for (Vertex v = 0; v < V; ++v) {
      const auto ns = neighbors(spec, v);
      CHECK(static_cast<Index>(ns.size()) == degree(spec));
      CHECK(std::is_sorted(ns.begin(), ns.end()));
      CHECK(std::adjacent_find(ns.begin(), ns.end()) == ns.end());
      for (Vertex u : ns) {
        const auto back = neighbors(spec, u);
        CHECK(std::binary_search(back.begin(), back.end(), v));
      }
    }
  }
}

TEST_CASE("encode inverts decode") {
  for (const auto& spec : {GraphSpec::torus_nn(3, 5), GraphSpec::hamming(2, 4), GraphSpec::hypercube(3)}) {
    for (Vertex v = 0; v < vertex_count(spec); ++v) CHECK(encode(spec, decode(spec, v)) == v);
  }
}

TEST_CASE("canonical edge list and Graph indexing agree") {
  for (const auto& spec : {GraphSpec::torus_nn(2, 5), GraphSpec::torus_spread(2, 5, 2), GraphSpec::complete(7),
                           GraphSpec::erdos_renyi(9), GraphSpec::hamming(3, 3)}) {
    const auto edges = edge_list(spec);
    CHECK(static_cast<Index>(edges.size()) == edge_count(spec));
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      CHECK(edges[i].index == static_cast<EdgeIndex>(i));
      CHECK(edges[i].u < edges[i].v);
      if (i > 0) CHECK(std::pair{edges[i - 1].u, edges[i - 1].v} < std::pair{edges[i].u, edges[i].v});
      seen.insert({edges[i].u, edges[i].v});
    }
    CHECK(seen.size() == edges.size());
    const Graph g(spec);
    std::vector<EdgeIndex> all;
    for (const auto& e : edges) {
      CHECK(g.endpoints(e.index) == std::pair{e.u, e.v});
      all.push_back(e.index);
    }
    std::size_t i = 0;
    g.for_each_endpoints(all, [&](EdgeIndex e, Vertex u, Vertex v) {
      CHECK(e == edges[i].index);
      CHECK(u == edges[i].u);
      CHECK(v == edges[i].v);
      ++i;
    });
    CHECK(i == edges.size());
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(GraphSpec::torus_nn(2, 2)), Error);
  CHECK_THROWS_AS(validate(GraphSpec::torus_spread(1, 4, 2)), Error);
  CHECK_THROWS_AS(validate(GraphSpec::complete(0)), Error);
  CHECK_THROWS_AS(validate(GraphSpec::torus_nn(0, 3)), Error);
  try {
    validate(GraphSpec::torus_nn(2, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
  CHECK_NOTHROW(validate(GraphSpec::torus_nn(7, 3)));
}

TEST_CASE("flags") {
  CHECK(theory_out_of_range(GraphSpec::torus_nn(6, 3)));
  CHECK_FALSE(theory_out_of_range(GraphSpec::torus_nn(7, 3)));
  CHECK(calibration_only(GraphSpec::erdos_renyi(100)));
  CHECK_FALSE(calibration_only(GraphSpec::complete(100)));
  CHECK(parse_family(family_name(Family::TorusSpread)) == Family::TorusSpread);
  CHECK_THROWS_AS(parse_family("moebius"), Error);
}

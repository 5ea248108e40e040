#include <doctest.h>

#include "perc/error.hpp"
#include "perc/oracle.hpp"
#include "test_support.hpp"

using namespace perc;

namespace {

testing::BruteForce brute_force(const GraphSpec& spec) {
  testing::BruteForce bf{vertex_count(spec), {}, origin(spec)};
  for (const Edge& e : edge_list(spec)) bf.edges.emplace_back(e.u, e.v);
  return bf;
}

}  // namespace

TEST_CASE("triangle at p = 1/2") {
  const auto r = enumerate_exact(GraphSpec::torus_nn(1, 3), 0.5);
  CHECK(r.chi == 9.0 / 4.0);
  CHECK(r.e_cmax == 19.0 / 8.0);
  CHECK(r.tail[2] == 3.0 / 4.0);
  CHECK(r.tail[3] == 1.0 / 2.0);
  CHECK(r.z_mean[2] == 9.0 / 4.0);
  CHECK(r.z_mean[3] == 3.0 / 2.0);
  CHECK(r.e_ranked[2] == 1.0 / 2.0);
  for (Vertex x = 0; x < 3; ++x)
    if (x != r.origin) CHECK(r.two_point[static_cast<std::size_t>(x)] == 5.0 / 8.0);
}

TEST_CASE("agrees with a brute-force enumeration") {
  for (const auto& spec : {GraphSpec::torus_nn(1, 3), GraphSpec::torus_nn(1, 4), GraphSpec::complete(4),
                           GraphSpec::hypercube(3), GraphSpec::torus_nn(2, 3)}) {
    const auto bf = brute_force(spec);
    for (double p : {0.2, 0.5, 0.8}) {
      const auto exact = enumerate_exact(spec, p);
      const auto ref = bf.evaluate(p);
      const double tol = 1e-12;
      CHECK(exact.chi == doctest::Approx(static_cast<double>(ref.chi)).epsilon(tol));
      CHECK(exact.e_cmax == doctest::Approx(static_cast<double>(ref.e_cmax)).epsilon(tol));
      const Index V = vertex_count(spec);
      for (Index k = 1; k <= V; ++k) {
        const auto i = static_cast<std::size_t>(k);
        CHECK(exact.tail[i] == doctest::Approx(static_cast<double>(ref.tail[i])).epsilon(tol));
        CHECK(exact.z_mean[i] == doctest::Approx(static_cast<double>(ref.z_mean[i])).epsilon(tol));
        const long double var = ref.z_second[i] - ref.z_mean[i] * ref.z_mean[i];
        CHECK(exact.z_variance[i] == doctest::Approx(static_cast<double>(var)).epsilon(1e-10).scale(V * V));
        CHECK(exact.z_third[i] == doctest::Approx(static_cast<double>(ref.z_third[i])).epsilon(tol));
        CHECK(exact.p_cmax_geq[i] == doctest::Approx(static_cast<double>(ref.p_cmax_geq[i])).epsilon(tol));
        CHECK(exact.e_ranked[i] == doctest::Approx(static_cast<double>(ref.e_ranked[i])).epsilon(tol));
      }
      for (Vertex x = 0; x < V; ++x)
        CHECK(exact.two_point[static_cast<std::size_t>(x)] ==
              doctest::Approx(static_cast<double>(ref.two_point[static_cast<std::size_t>(x)])).epsilon(tol));
    }
  }
}

TEST_CASE("count polynomials satisfy the Z identity coefficientwise") {
  for (const auto& spec : {GraphSpec::torus_nn(1, 3), GraphSpec::torus_nn(1, 4), GraphSpec::complete(4),
                           GraphSpec::hypercube(3)}) {
    const auto counts = enumerate_counts(spec);
    const auto V = static_cast<std::uint64_t>(counts.vertices);
    for (Index k = 1; k <= counts.vertices; ++k) {
      const auto& z = counts.z1[static_cast<std::size_t>(k)].coeff;
      const auto& t = counts.origin_tail[static_cast<std::size_t>(k)].coeff;
      REQUIRE(z.size() == t.size());
      for (std::size_t o = 0; o < z.size(); ++o) CHECK(z[o] == V * t[o]);
    }
  }
}

TEST_CASE("extreme p") {
  for (const auto& spec : {GraphSpec::complete(5), GraphSpec::hypercube(3)}) {
    const auto zero = enumerate_exact(spec, 0.0);
    CHECK(zero.chi == 1.0);
    CHECK(zero.e_cmax == 1.0);
    const auto one = enumerate_exact(spec, 1.0);
    CHECK(one.e_cmax == static_cast<double>(vertex_count(spec)));
    for (Index k = 1; k <= vertex_count(spec); ++k) CHECK(one.tail[static_cast<std::size_t>(k)] == 1.0);
  }
}

TEST_CASE("edge limit") {
  CHECK_THROWS_AS(enumerate_counts(GraphSpec::torus_nn(2, 4)), Error);  // 32 edges
  try {
    enumerate_counts(GraphSpec::complete(8));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyEdges);
  }
}

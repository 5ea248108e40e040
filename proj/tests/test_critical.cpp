#include <doctest.h>

#include "perc/critical.hpp"
#include "perc/error.hpp"

using namespace perc;

TEST_CASE("complete graph critical point sits at 1/n") {
  const auto spec = GraphSpec::complete(1 << 14);
  const auto cp = find_pc(spec, 1.0, 0.25 * window_scale(spec), 20000, 5);
  const double scaled = cp.p_hat * static_cast<double>((1 << 14) - 1);
  CHECK(scaled >= 0.8);
  CHECK(scaled <= 1.2);
  CHECK(cp.ci.first <= cp.p_hat);
  CHECK(cp.p_hat <= cp.ci.second);
}

TEST_CASE("target at or below one gives p = 0") {
  const auto spec = GraphSpec::torus_nn(3, 5);
  const double lambda = 0.5 / std::cbrt(125.0);
  const auto cp = find_pc(spec, lambda, 1e-3, 1000, 1);
  CHECK(cp.p_hat == 0.0);
  CHECK(cp.ci == std::pair{0.0, 0.0});
}

TEST_CASE("triangle bracket contains the oracle root") {
  const auto tri = GraphSpec::torus_nn(1, 3);
  const double lambda = 2.25 / std::cbrt(3.0);
  CHECK(target_chi(tri, lambda) == doctest::Approx(2.25));
  const auto cp = find_pc(tri, lambda, 0.02, 400000, 9);
  CHECK(cp.ci.first <= 0.5);
  CHECK(cp.ci.second >= 0.5);
}

TEST_CASE("unreachable target and bad arguments") {
  const auto tri = GraphSpec::torus_nn(1, 3);
  CHECK_THROWS_AS(find_pc(tri, 10.0, 0.01, 1000, 1), Error);
  try {
    find_pc(tri, 10.0, 0.01, 1000, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TargetUnreachable);
  }
  CHECK_THROWS_AS(find_pc(tri, -1.0, 0.01, 1000, 1), Error);
  CHECK_THROWS_AS(find_pc(tri, 1.0, 0.0, 1000, 1), Error);
}

TEST_CASE("a tiny budget is reported, not thrown") {
  const auto spec = GraphSpec::torus_nn(3, 6);
  const auto cp = find_pc(spec, 1.0, 1e-6, 64, 1);
  CHECK(cp.budget_exhausted);
  CHECK(cp.budget_used <= 64);
  CHECK(cp.ci.first <= cp.ci.second);
}

TEST_CASE("window sweep") {
  const auto spec = GraphSpec::torus_nn(7, 4);
  const auto cp = find_pc(spec, 1.0, 0.25 * window_scale(spec), 4000, 3);
  const auto sweep = window_sweep(spec, cp.p_hat, 6.0, 5, 40, 3);
  REQUIRE(sweep.points.size() == 5);
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    CHECK(sweep.points[i].p > sweep.points[i - 1].p);
    CHECK(sweep.points[i].chi.value >= sweep.points[i - 1].chi.value);
  }
  CHECK(sweep.points.back().chi.lo() > sweep.points.front().chi.hi());
  CHECK_FALSE(sweep.clipped);

  const auto single = window_sweep(spec, 0.1, 0.0, 3, 20, 4);
  REQUIRE(single.points.size() == 1);
  const auto direct = estimate_chi(spec, 0.1, 20, 4);
  CHECK(single.points[0].chi.value == direct.value);

  const auto clipped = window_sweep(GraphSpec::torus_nn(1, 3), 0.99, 10.0, 5, 4, 1);
  CHECK(clipped.clipped);
  for (const auto& pt : clipped.points) CHECK(pt.p <= 1.0);
}

TEST_CASE("complete graph window is asymmetric in C_max") {
  const auto spec = GraphSpec::complete(1 << 12);
  const double center = 1.0 / 4096.0;
  const auto sweep = window_sweep(spec, center, 3.0, 3, 200, 2);
  CHECK(sweep.points.back().mean_cmax.value > sweep.points.front().mean_cmax.value);
}

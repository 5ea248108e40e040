#include <doctest.h>

#include "perc/error.hpp"
#include "perc/estimators.hpp"

using namespace perc;

namespace {
const GraphSpec kTriangle = GraphSpec::torus_nn(1, 3);
}

TEST_CASE("chi") {
  const auto spec = GraphSpec::torus_nn(3, 4);
  const Estimate zero = estimate_chi(spec, 0.0, 20, 1);
  CHECK(zero.value == 1.0);
  CHECK(zero.std_error == 0.0);
  const Estimate one = estimate_chi(spec, 1.0, 20, 1);
  CHECK(one.value == static_cast<double>(vertex_count(spec)));
  CHECK(estimate_chi(kTriangle, 0.5, 20000, 3).agrees_with(9.0 / 4.0));
  CHECK_THROWS_AS(estimate_chi(kTriangle, 0.5, 1, 3), Error);
}

TEST_CASE("tails") {
  const auto curve = tail_probability(kTriangle, 0.5, {1, 2, 3}, 20000, 5);
  CHECK(curve.probs[0].value == 1.0);
  CHECK(curve.probs[0].std_error == 0.0);
  CHECK(curve.probs[1].agrees_with(0.75));
  CHECK(curve.probs[2].agrees_with(0.5));
  CHECK(geometric_k_grid(10) == std::vector<Index>{1, 2, 4, 8, 10});
  CHECK(geometric_k_grid(8) == std::vector<Index>{1, 2, 4, 8});
}

TEST_CASE("two-point") {
  const auto spec = GraphSpec::hypercube(4);
  const Vertex x = neighbors(spec, origin(spec)).front();
  CHECK(two_point(spec, 1.0, x, 10, 1).value == 1.0);
  CHECK(two_point(spec, 0.0, x, 10, 1).value == 0.0);
  const Vertex t1 = neighbors(kTriangle, origin(kTriangle)).front();
  CHECK(two_point(kTriangle, 0.5, t1, 20000, 2).agrees_with(5.0 / 8.0));
  CHECK_THROWS_AS(two_point(kTriangle, 0.5, origin(kTriangle), 100, 2), Error);
}

TEST_CASE("Z moments") {
  const auto k1 = zgeq_moments(GraphSpec::torus_nn(2, 4), 0.4, 1, 50, 1);
  CHECK(k1.mean.value == 16.0);
  CHECK(k1.variance.value == 0.0);
  CHECK(zgeq_moments(kTriangle, 0.5, 2, 20000, 3).mean.agrees_with(9.0 / 4.0));
  CHECK(zgeq_moments(kTriangle, 0.5, 3, 20000, 3).mean.agrees_with(3.0 / 2.0));
  CHECK_THROWS_AS(zgeq_moments(kTriangle, 0.5, 2, 5, 3), Error);
}

TEST_CASE("tail and Z estimators agree") {
  const auto spec = GraphSpec::torus_nn(3, 5);
  const double V = static_cast<double>(vertex_count(spec));
  for (Index k : {2, 8, 32}) {
    const auto tail = tail_probability(spec, 0.2, {k}, 400, 8).probs[0];
    const auto z = zgeq_moments(spec, 0.2, k, 400, 9).mean;
    const double se = std::hypot(V * tail.std_error, z.std_error);
    CHECK(std::abs(V * tail.value - z.value) <= 3 * se + 1e-9);
  }
}

TEST_CASE("cmax distribution") {
  const auto spec = GraphSpec::hypercube(6);
  const double V = 64.0;
  const auto full = cmax_distribution(spec, 1.0, 100, 1);
  CHECK(full.coefficient_of_variation == 0.0);
  for (double s : full.samples) CHECK(s == doctest::Approx(std::cbrt(V)));
  const auto empty = cmax_distribution(spec, 0.0, 100, 1);
  for (double s : empty.samples) CHECK(s == doctest::Approx(std::pow(V, -2.0 / 3.0)));
  CHECK(cmax_distribution(kTriangle, 0.5, 20000, 1).mean_cmax.agrees_with(19.0 / 8.0));
  CHECK_THROWS_AS(cmax_distribution(kTriangle, 0.5, 99, 1), Error);
}

TEST_CASE("results do not depend on the worker count") {
  const auto spec = GraphSpec::torus_nn(3, 5);
  set_worker_count(1);
  const auto a = estimate_chi(spec, 0.2, 64, 17);
  set_worker_count(4);
  const auto b = estimate_chi(spec, 0.2, 64, 17);
  set_worker_count(1);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("exact audit passes on oracle graphs") {
  for (const auto& spec : {GraphSpec::torus_nn(1, 3), GraphSpec::torus_nn(1, 4), GraphSpec::complete(4),
                           GraphSpec::hypercube(3)}) {
    for (double p : {0.2, 0.5, 0.8}) {
      const auto report = audit_exact(enumerate_exact(spec, p));
      CHECK(report.items.size() == 5);
      CHECK(report.all_pass());
    }
  }
}

TEST_CASE("Monte Carlo audit passes") {
  const auto report = audit_monte_carlo(GraphSpec::torus_nn(3, 5), 0.18, {1, 2, 4, 8, 16, 32, 64}, 400, 3);
  CHECK(report.monte_carlo);
  CHECK(report.all_pass());
  CHECK_THROWS_AS(audit_monte_carlo(GraphSpec::torus_nn(3, 5), 0.18, {2}, 10, 3), Error);
}

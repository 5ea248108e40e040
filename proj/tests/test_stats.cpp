#include <doctest.h>

#include "perc/stats.hpp"

using namespace perc;

TEST_CASE("compensated sum") {
  std::vector<double> xs{1e16, 1.0, -1e16};
  CHECK(compensated_sum(xs) == 1.0);
  std::vector<double> many(1000000, 0.1);
  CHECK(compensated_sum(many) == doctest::Approx(100000.0).epsilon(1e-15));
}

TEST_CASE("moments") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean(xs) == 2.5);
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
  const auto e = mean_estimate(xs);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(e.replicates == 4);
  CHECK(coefficient_of_variation(std::vector<double>{3, 3, 3}) == 0.0);
}

TEST_CASE("quantiles") {
  const std::vector<double> xs{4, 1, 3, 2};
  CHECK(median(xs) == 2.5);
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
  CHECK(quantile(xs, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("variance estimate") {
  const std::vector<double> xs{1, 2, 4, 8, 16};
  const auto v = variance_estimate(xs);
  CHECK(v.value == doctest::Approx(sample_variance(xs)));
  CHECK(v.std_error > 0.0);
}

TEST_CASE("two-sample KS distance") {
  const std::vector<double> a{1, 2, 3};
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(ks_distance({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_distance({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("agreement floor for exact estimates") {
  const Estimate e{1.0, 0.0, 10};
  CHECK(e.agrees_with(1.0));
  CHECK_FALSE(e.agrees_with(1.1));
}

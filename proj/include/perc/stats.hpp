#ifndef PERC_STATS_HPP
#define PERC_STATS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace perc {

/// Monte Carlo statistic with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t replicates = 0;

  double lo(double z = 3.0) const { return value - z * std_error; }
  double hi(double z = 3.0) const { return value + z * std_error; }
  /// |value - target| <= z * std_error, with a floor for exact estimates.
  bool agrees_with(double target, double z = 3.0) const {
    return std::abs(value - target) <= z * std_error + 1e-12 * std::max(1.0, std::abs(target));
  }
};

/// Neumaier-compensated sum, accumulated in index order.
double compensated_sum(std::span<const double> xs);
double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two samples.
double sample_variance(std::span<const double> xs);

/// Mean and standard error sd/sqrt(R).
Estimate mean_estimate(std::span<const double> xs);

/// Linear-interpolation quantile (type 7) of unsorted data; q in [0,1].
double quantile(std::vector<double> xs, double q);
double median(std::vector<double> xs);

/// Delete-one jackknife standard error from leave-one-out statistics.
double jackknife_se(std::span<const double> leave_one_out);

/// Unbiased variance with a delete-one jackknife standard error.
Estimate variance_estimate(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Coefficient of variation, sample sd over mean; 0 when the mean is 0.
double coefficient_of_variation(std::span<const double> xs);

}  // namespace perc

#endif  // PERC_STATS_HPP

#include "perc/stats.hpp"

#include <algorithm>

#include "perc/error.hpp"

namespace perc {

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  std::transform(xs.begin(), xs.end(), sq.begin(), [m](double x) { return (x - m) * (x - m); });
  return compensated_sum(sq) / static_cast<double>(xs.size() - 1);
}

Estimate mean_estimate(std::span<const double> xs) {
  Estimate e;
  e.replicates = static_cast<std::int64_t>(xs.size());
  e.value = mean(xs);
  e.std_error = xs.size() < 2 ? 0.0 : std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
  return e;
}

double quantile(std::vector<double> xs, double q) {
  require(!xs.empty(), ErrorCode::InsufficientSamples, "quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

double jackknife_se(std::span<const double> loo) {
  const auto n = static_cast<double>(loo.size());
  if (loo.size() < 2) return 0.0;
  const double m = mean(loo);
  std::vector<double> sq(loo.size());
  std::transform(loo.begin(), loo.end(), sq.begin(), [m](double x) { return (x - m) * (x - m); });
  return std::sqrt((n - 1.0) / n * compensated_sum(sq));
}

Estimate variance_estimate(std::span<const double> xs) {
  Estimate e;
  e.replicates = static_cast<std::int64_t>(xs.size());
  e.value = sample_variance(xs);
  if (xs.size() < 3) return e;
  // Leave-one-out variances from centred sums.
  const double n = static_cast<double>(xs.size());
  const double m = mean(xs);
  std::vector<double> dev(xs.size()), sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    dev[i] = xs[i] - m;
    sq[i] = dev[i] * dev[i];
  }
  const double ss = compensated_sum(sq);
  std::vector<double> loo(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Removing x_i shifts the mean by -dev_i/(n-1).
    const double ss_i = ss - sq[i] - sq[i] / (n - 1.0);
    loo[i] = ss_i / (n - 2.0);
  }
  e.std_error = jackknife_se(loo);
  return e;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::InsufficientSamples, "KS distance of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double coefficient_of_variation(std::span<const double> xs) {
  const double m = mean(xs);
  if (m == 0.0) return 0.0;
  return std::sqrt(sample_variance(xs)) / m;
}

}  // namespace perc

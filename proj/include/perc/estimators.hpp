#ifndef PERC_ESTIMATORS_HPP
#define PERC_ESTIMATORS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "perc/error.hpp"
#include "perc/oracle.hpp"
#include "perc/parallel.hpp"
#include "perc/percolate.hpp"
#include "perc/stats.hpp"

namespace perc {

/// Applies fn(config, labeling) to replicates [first, first+count) and
/// returns the results in replicate order.
template <typename T, typename Fn>
std::vector<T> map_replicates(const GraphPtr& graph, double p, std::uint64_t seed,
                              std::int64_t first, std::int64_t count, Fn&& fn) {
  check_probability(p);
  return parallel_map<T>(count, [&](std::int64_t i) {
    BondConfig config = sample_bonds(graph, p, seed, first + i);
    ClusterLabeling labeling = cluster(config);
    return fn(config, labeling);
  });
}

struct TailCurve {
  std::vector<Index> ks;
  std::vector<Estimate> probs;  // P(|C| >= k)
};

struct ZMoments {
  Estimate mean;
  Estimate variance;
  Estimate third_moment;  // raw E[Z^3]
};

struct CmaxDistribution {
  std::vector<double> samples;  // |C_max| V^{-2/3}
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
  double coefficient_of_variation = 0.0;
  Estimate mean_rescaled;
  Estimate mean_cmax;  // unscaled |C_max|
};

/// Quantile levels reported for rescaled cluster-size distributions.
const std::vector<double>& report_quantile_levels();

/// {1, 2, 4, ...} capped at V (V itself included).
std::vector<Index> geometric_k_grid(Index V);

/// chi = E|C(0)|, estimated per replicate by (1/V) sum_clusters |C|^2.
Estimate estimate_chi(const GraphPtr& graph, double p, std::int64_t replicates, std::uint64_t seed);
Estimate estimate_chi(const GraphSpec& spec, double p, std::int64_t replicates, std::uint64_t seed);

/// Per-replicate chi samples, the building block of estimate_chi.
std::vector<double> chi_samples(const GraphPtr& graph, double p, std::uint64_t seed,
                                std::int64_t first, std::int64_t count);

/// P(|C| >= k) as the replicate mean of Z_{>=k}/V.
TailCurve tail_probability(const GraphSpec& spec, double p, const std::vector<Index>& ks,
                           std::int64_t replicates, std::uint64_t seed);

/// P(0 <-> x) as the fraction of replicates joining origin and x.
Estimate two_point(const GraphSpec& spec, double p, Vertex x, std::int64_t replicates,
                   std::uint64_t seed);

ZMoments zgeq_moments(const GraphSpec& spec, double p, Index k, std::int64_t replicates,
                      std::uint64_t seed);

CmaxDistribution cmax_distribution(const GraphSpec& spec, double p, std::int64_t replicates,
                                   std::uint64_t seed);
CmaxDistribution cmax_distribution_from(std::vector<double> rescaled, Index V);

// --- inequality audits --------------------------------------------------------

enum class Inequality {
  VarianceUpper,      // Var Z_{>=k} <= V chi
  VarianceLower,      // Var Z_{>=k} >= V P(|C|>=k) [k - V P(|C|>=k)]
  ThirdMomentUpper,   // E Z^3 <= V chi^3 + 3 E Z V chi + (E Z)^3
  CmaxUnionBound,     // P(|C_max|>=k) <= (V/k) P(|C|>=k)
  ExponentialTail,    // k >= chi^2: P(|C|>=k) <= (e/k)^{1/2} exp(-k/(2 chi^2))
};

std::string_view inequality_name(Inequality which);

struct AuditItem {
  Inequality which;
  bool pass = true;
  Index ks_checked = 0;
  /// Smallest slack (rhs - lhs); in Monte Carlo mode divided by its SE.
  double worst_slack = 0.0;
  Index worst_k = 0;
};

struct AuditReport {
  bool monte_carlo = false;
  double chi = 0.0;
  std::vector<AuditItem> items;
  bool all_pass() const;
};

/// Checks all five inequalities on exact values; slack >= -tol * scale.
AuditReport audit_exact(const ExactReport& report, double tolerance = 1e-12);

/// Checks all five on Monte Carlo estimates: an inequality fails only if its
/// slack is below -z standard errors (grouped jackknife over replicates).
AuditReport audit_monte_carlo(const GraphSpec& spec, double p, const std::vector<Index>& ks,
                              std::int64_t replicates, std::uint64_t seed, double z = 3.0);

}  // namespace perc

#endif  // PERC_ESTIMATORS_HPP

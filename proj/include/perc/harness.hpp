#ifndef PERC_HARNESS_HPP
#define PERC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perc/critical.hpp"
#include "perc/estimators.hpp"
#include "perc/geometry.hpp"
#include "perc/records.hpp"
#include "perc/rwalk.hpp"

namespace perc {

// --- fits ---------------------------------------------------------------------

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> slope_ci{0.0, 0.0};
  Index points_used = 0;
};

/// Least squares of log y on log x. Points with nonpositive x or y are
/// skipped; fewer than `min_points` usable points throws InsufficientPoints.
/// The CI is degenerate (slope, slope).
FitResult fit_loglog(std::span<const double> x, std::span<const double> y, Index min_points = 3);

enum class Summary { Median, Mean };

/// Replicate-level values of one statistic at one graph size.
struct SizeSamples {
  double size = 0.0;  // V
  std::vector<double> values;
};

double summarize(std::vector<double> values, Summary summary);

/// Log-log fit of the per-size summary against V, with a percentile CI from
/// a nonparametric bootstrap that resamples replicate values within sizes.
FitResult fit_exponent(const std::vector<SizeSamples>& data, Summary summary, int bootstrap = 1000,
                       std::uint64_t seed = 1);

/// Fit from persisted records: x = V of the record spec, y = value of every
/// record with the given statistic (and rank, if given). When matching
/// "sample" records exist the CI is bootstrapped from them.
FitResult fit_exponent(const std::vector<Record>& records, const std::string& statistic,
                       std::optional<Index> rank = std::nullopt, Summary summary = Summary::Median,
                       int bootstrap = 1000, std::uint64_t seed = 1);

/// Default tail-fit window [16, fraction * V^{2/3}].
std::pair<Index, Index> default_tail_window(Index V, double fraction = 0.25);

/// Slope of log P(|C| >= k) against log k over ks in [k_lo, k_hi]. The
/// window must span at least a decade. CI from a parametric bootstrap that
/// perturbs each point by its standard error.
FitResult tail_exponent(const TailCurve& curve, Index k_lo, Index k_hi, int bootstrap = 1000,
                        std::uint64_t seed = 1);

// --- distribution diagnostics -------------------------------------------------------

struct SizeDiagnostics {
  double size = 0.0;
  double cv = 0.0;
  double median = 0.0;
  double iqr_ratio = 0.0;  // q75 / q25
};

struct NonconcentrationReport {
  std::vector<SizeDiagnostics> sizes;
  double ks_distance = 0.0;  // smallest vs largest size
  bool degenerate = false;   // every CV is zero
  bool cv_stable = false;    // CV(largest) >= 0.5 CV(smallest)
  bool cv_floor = false;     // CV >= 0.1 at every size
  bool medians_tight = false;  // max median / min median <= 2
  bool pass() const { return !degenerate && cv_stable && medians_tight; }
};

/// Needs >= 3 sizes with >= min_samples rescaled |C_max| samples each.
NonconcentrationReport nonconcentration_report(const std::vector<SizeSamples>& rescaled_cmax,
                                               std::size_t min_samples = 200);

struct RankStats {
  Index rank = 1;
  std::vector<double> rescaled;  // |C_(i)| V^{-2/3} per replicate
  std::vector<std::pair<double, double>> quantiles;
  Estimate mean_size;  // E|C_(i)|, unscaled
  Index absent = 0;    // replicates with fewer than i clusters
};

std::vector<RankStats> ordered_cluster_stats(const GraphSpec& spec, double p, Index m,
                                             std::int64_t replicates, std::uint64_t seed);

// --- sweeps -----------------------------------------------------------------

/// How p is chosen at each size.
struct PPolicy {
  enum class Kind { Fixed, Critical } kind = Kind::Fixed;
  std::vector<double> fixed;     // one per size, or a single value for all
  double lambda = 1.0;
  double tolerance_windows = 0.25;  // find_pc tolerance in units of window_scale
  std::int64_t budget = 20000;      // find_pc replicate budget per size
};

struct SweepStatistics {
  bool chi = true;
  bool cmax = true;
  bool tail = true;
  Index ranks = 3;          // ordered cluster ranks recorded (0 disables)
  bool diameter = false;
  bool mixing = false;
};

struct SweepPlan {
  std::vector<GraphSpec> sizes;
  PPolicy policy;
  SweepStatistics stats;
  std::int64_t replicates = 100;
  std::uint64_t seed = 1;
  Index exact_diameter_threshold = kDefaultExactDiameterThreshold;
  Index mixing_exact_cap = kDefaultMixingExactCap;
  Index mixing_max_steps = 1'000'000;
  bool persist_samples = false;
};

/// Throws InvalidArgument unless sizes are strictly increasing in V and the
/// policy matches the number of sizes.
void validate(const SweepPlan& plan);

struct ReplicateMeasure {
  double chi = 0.0;
  Index cmax = 0;
  std::vector<Index> ranked;  // ranks 1..m, 0 when absent
  std::vector<Index> z;       // Z_{>=k} on the size's k grid
  Index cmax_edges = 0;
  Index diameter = -1;
  bool diameter_exact = true;
  Index tmix = -1;            // exact lazy-walk mixing time of C_max
  bool tmix_exact = false;
  Index tmix_upper = -1;      // 8 |E| diam
};

struct SizeResult {
  GraphSpec spec;
  Index vertices = 0;
  double p = 0.0;
  std::optional<CriticalPoint> critical;
  std::vector<Index> ks;
  std::vector<ReplicateMeasure> replicates;
  TailCurve tail;

  double scale() const;  // V^{2/3}
  std::vector<double> cmax_samples() const;
  std::vector<double> rescaled_cmax() const;
  std::vector<double> ranked_samples(Index rank) const;
  std::vector<double> diameter_samples() const;
  std::vector<double> tmix_samples() const;  // exact values only
  Index sandwich_violations() const;         // exact t_mix > 8|E| diam
  Index inexact_diameters() const;
};

struct SweepResult {
  std::vector<SizeResult> sizes;
};

/// Runs the plan size by size, sending each size's records to the sink as
/// soon as it completes. Records carry full provenance.
SweepResult run_sweep(const SweepPlan& plan, const RecordSink& sink = {});

/// Measures one configuration the way run_sweep does.
ReplicateMeasure measure_replicate(const BondConfig& config, const ClusterLabeling& labeling,
                                   const std::vector<Index>& ks, const SweepPlan& plan);

}  // namespace perc

#endif  // PERC_HARNESS_HPP

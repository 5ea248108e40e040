#include "perc/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "perc/error.hpp"
#include "perc/rng.hpp"

namespace perc {

// --- fits ---------------------------------------------------------------------

FitResult fit_loglog(std::span<const double> x, std::span<const double> y, Index min_points) {
  require(x.size() == y.size(), ErrorCode::InvalidArgument, "x and y differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const auto n = static_cast<Eigen::Index>(lx.size());
  require(n >= min_points && n >= 2, ErrorCode::InsufficientPoints,
          std::to_string(n) + " usable points, need " + std::to_string(std::max<Index>(min_points, 2)));
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = lx[static_cast<std::size_t>(i)];
    b(i) = ly[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  FitResult fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.points_used = n;
  const double ss_res = (A * coef - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.slope_ci = {fit.slope, fit.slope};
  return fit;
}

double summarize(std::vector<double> values, Summary summary) {
  require(!values.empty(), ErrorCode::InsufficientSamples, "no values to summarise");
  return summary == Summary::Median ? median(std::move(values)) : mean(values);
}

namespace {

std::pair<double, double> percentile_ci(std::vector<double> slopes, double slope) {
  if (slopes.empty()) return {slope, slope};
  const double lo = quantile(slopes, 0.025);
  const double hi = quantile(std::move(slopes), 0.975);
  return {std::min(lo, slope), std::max(hi, slope)};
}

}  // namespace

FitResult fit_exponent(const std::vector<SizeSamples>& data, Summary summary, int bootstrap,
                       std::uint64_t seed) {
  require(data.size() >= 3, ErrorCode::InsufficientPoints, "exponent fits need at least 3 sizes");
  std::vector<double> x, y;
  for (const auto& s : data) {
    x.push_back(s.size);
    y.push_back(summarize(s.values, summary));
  }
  FitResult fit = fit_loglog(x, y);
  std::vector<double> slopes;
  std::vector<double> resampled;
  for (int b = 0; b < bootstrap; ++b) {
    std::vector<double> yb;
    for (std::size_t i = 0; i < data.size(); ++i) {
      CounterRng rng(hash_key(seed, static_cast<std::uint64_t>(b), i));
      const auto& v = data[i].values;
      resampled.resize(v.size());
      for (auto& r : resampled) r = v[static_cast<std::size_t>(rng() % v.size())];
      yb.push_back(summarize(resampled, summary));
    }
    try {
      slopes.push_back(fit_loglog(x, yb).slope);
    } catch (const Error&) {
      // resample with a zero summary; skip it
    }
  }
  fit.slope_ci = percentile_ci(std::move(slopes), fit.slope);
  return fit;
}

FitResult fit_exponent(const std::vector<Record>& records, const std::string& statistic,
                       std::optional<Index> rank, Summary summary, int bootstrap, std::uint64_t seed) {
  std::map<Index, SizeSamples> samples;
  std::map<Index, double> summaries;
  for (const Record& r : records) {
    if (r.statistic != statistic || r.rank != rank) continue;
    const Index V = vertex_count(r.spec);
    if (r.record_type == "sample") {
      samples[V].size = static_cast<double>(V);
      samples[V].values.push_back(r.value);
    } else if (r.record_type == "estimate") {
      summaries[V] = r.value;
    }
  }
  if (!samples.empty()) {
    std::vector<SizeSamples> data;
    for (auto& [V, s] : samples) data.push_back(std::move(s));
    return fit_exponent(data, summary, bootstrap, seed);
  }
  std::vector<double> x, y;
  for (const auto& [V, value] : summaries) {
    x.push_back(static_cast<double>(V));
    y.push_back(value);
  }
  return fit_loglog(x, y);
}

std::pair<Index, Index> default_tail_window(Index V, double fraction) {
  const double scale = std::cbrt(static_cast<double>(V) * static_cast<double>(V));
  return {16, static_cast<Index>(std::floor(fraction * scale))};
}

FitResult tail_exponent(const TailCurve& curve, Index k_lo, Index k_hi, int bootstrap, std::uint64_t seed) {
  require(k_lo >= 1 && k_hi >= 10 * k_lo, ErrorCode::WindowTooNarrow,
          "tail window [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + "] spans less than a decade");
  std::vector<double> x, y, se;
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    if (curve.ks[i] < k_lo || curve.ks[i] > k_hi) continue;
    x.push_back(static_cast<double>(curve.ks[i]));
    y.push_back(curve.probs[i].value);
    se.push_back(curve.probs[i].std_error);
  }
  FitResult fit = fit_loglog(x, y);
  std::vector<double> slopes;
  for (int b = 0; b < bootstrap; ++b) {
    CounterRng rng(hash_key(seed, static_cast<std::uint64_t>(b)));
    std::vector<double> yb(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      // Box-Muller normal perturbation.
      const double u1 = rng.uniform_open0(), u2 = rng.uniform();
      const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      yb[i] = y[i] + se[i] * gauss;
    }
    try {
      slopes.push_back(fit_loglog(x, yb).slope);
    } catch (const Error&) {
    }
  }
  fit.slope_ci = percentile_ci(std::move(slopes), fit.slope);
  return fit;
}

// --- diagnostics ----------------------------------------------------------------------

NonconcentrationReport nonconcentration_report(const std::vector<SizeSamples>& data, std::size_t min_samples) {
  require(data.size() >= 3, ErrorCode::InsufficientSamples, "non-concentration needs at least 3 sizes");
  for (const auto& s : data)
    require(s.values.size() >= min_samples, ErrorCode::InsufficientSamples,
            "size " + format_double(s.size) + " has " + std::to_string(s.values.size()) + " samples, need " +
                std::to_string(min_samples));
  NonconcentrationReport report;
  std::vector<SizeSamples> sorted = data;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.size < b.size; });
  for (const auto& s : sorted) {
    SizeDiagnostics d;
    d.size = s.size;
    d.cv = coefficient_of_variation(s.values);
    d.median = median(s.values);
    const double q25 = quantile(s.values, 0.25);
    d.iqr_ratio = q25 > 0.0 ? quantile(s.values, 0.75) / q25 : INFINITY;
    report.sizes.push_back(d);
  }
  report.ks_distance = ks_distance(sorted.front().values, sorted.back().values);
  report.degenerate = std::all_of(report.sizes.begin(), report.sizes.end(), [](const auto& d) { return d.cv == 0.0; });
  report.cv_stable = report.sizes.back().cv >= 0.5 * report.sizes.front().cv;
  report.cv_floor = std::all_of(report.sizes.begin(), report.sizes.end(), [](const auto& d) { return d.cv >= 0.1; });
  auto [lo, hi] = std::minmax_element(report.sizes.begin(), report.sizes.end(),
                                      [](const auto& a, const auto& b) { return a.median < b.median; });
  report.medians_tight = lo->median > 0.0 && hi->median / lo->median <= 2.0;
  return report;
}

std::vector<RankStats> ordered_cluster_stats(const GraphSpec& spec, double p, Index m,
                                             std::int64_t replicates, std::uint64_t seed) {
  check_probability(p);
  require(m >= 1, ErrorCode::InvalidArgument, "m must be at least 1");
  require(replicates >= 1, ErrorCode::InvalidArgument, "need at least one replicate");
  auto graph = make_graph(spec);
  const Index V = graph->vertex_count();
  const double scale = std::cbrt(static_cast<double>(V) * static_cast<double>(V));
  auto rows = map_replicates<std::vector<Index>>(graph, p, seed, 0, replicates,
                                                 [m](const BondConfig&, const ClusterLabeling& labeling) {
                                                   std::vector<Index> sizes(static_cast<std::size_t>(m));
                                                   for (Index i = 1; i <= m; ++i) sizes[i - 1] = labeling.ranked_size(i);
                                                   return sizes;
                                                 });
  std::vector<RankStats> out;
  for (Index i = 1; i <= m; ++i) {
    RankStats s;
    s.rank = i;
    std::vector<double> raw;
    for (const auto& row : rows) {
      const Index size = row[static_cast<std::size_t>(i - 1)];
      if (size == 0) ++s.absent;
      raw.push_back(static_cast<double>(size));
      s.rescaled.push_back(static_cast<double>(size) / scale);
    }
    for (double level : report_quantile_levels()) s.quantiles.emplace_back(level, quantile(s.rescaled, level));
    s.mean_size = mean_estimate(raw);
    out.push_back(std::move(s));
  }
  return out;
}

// --- sweeps ------------------------------------------------------------------

void validate(const SweepPlan& plan) {
  require(!plan.sizes.empty(), ErrorCode::InvalidArgument, "sweep plan has no sizes");
  require(plan.replicates >= 2, ErrorCode::InvalidArgument, "sweep needs at least 2 replicates per size");
  for (std::size_t i = 0; i < plan.sizes.size(); ++i) {
    validate(plan.sizes[i]);
    if (i > 0)
      require(vertex_count(plan.sizes[i]) > vertex_count(plan.sizes[i - 1]), ErrorCode::InvalidArgument,
              "sweep sizes must be strictly increasing in V");
  }
  if (plan.policy.kind == PPolicy::Kind::Fixed) {
    require(plan.policy.fixed.size() == 1 || plan.policy.fixed.size() == plan.sizes.size(),
            ErrorCode::InvalidArgument, "fixed p policy needs one value or one per size");
    for (double p : plan.policy.fixed) check_probability(p);
  } else {
    require(plan.policy.lambda > 0.0 && plan.policy.tolerance_windows > 0.0, ErrorCode::InvalidArgument,
            "critical policy needs positive lambda and tolerance");
  }
}

double SizeResult::scale() const {
  return std::cbrt(static_cast<double>(vertices) * static_cast<double>(vertices));
}

std::vector<double> SizeResult::cmax_samples() const {
  std::vector<double> out;
  for (const auto& r : replicates) out.push_back(static_cast<double>(r.cmax));
  return out;
}

std::vector<double> SizeResult::rescaled_cmax() const {
  std::vector<double> out = cmax_samples();
  for (double& x : out) x /= scale();
  return out;
}

std::vector<double> SizeResult::ranked_samples(Index rank) const {
  std::vector<double> out;
  for (const auto& r : replicates) out.push_back(static_cast<double>(r.ranked.at(static_cast<std::size_t>(rank - 1))));
  return out;
}

std::vector<double> SizeResult::diameter_samples() const {
  std::vector<double> out;
  for (const auto& r : replicates)
    if (r.diameter >= 0) out.push_back(static_cast<double>(r.diameter));
  return out;
}

std::vector<double> SizeResult::tmix_samples() const {
  std::vector<double> out;
  for (const auto& r : replicates)
    if (r.tmix >= 0 && r.tmix_exact) out.push_back(static_cast<double>(r.tmix));
  return out;
}

Index SizeResult::sandwich_violations() const {
  Index n = 0;
  for (const auto& r : replicates)
    if (r.tmix_exact && r.tmix_upper >= 0 && r.tmix > r.tmix_upper) ++n;
  return n;
}

Index SizeResult::inexact_diameters() const {
  Index n = 0;
  for (const auto& r : replicates)
    if (r.diameter >= 0 && !r.diameter_exact) ++n;
  return n;
}

ReplicateMeasure measure_replicate(const BondConfig& config, const ClusterLabeling& labeling,
                                   const std::vector<Index>& ks, const SweepPlan& plan) {
  ReplicateMeasure m;
  m.chi = sum_squared_sizes(labeling) / static_cast<double>(labeling.vertex_count());
  m.cmax = labeling.cmax();
  for (Index i = 1; i <= plan.stats.ranks; ++i) m.ranked.push_back(labeling.ranked_size(i));
  if (plan.stats.tail)
    for (Index k : ks) m.z.push_back(z_geq(labeling, k));
  if (plan.stats.diameter || plan.stats.mixing) {
    const ClusterSubgraph c = extract_cluster(config, labeling, ByRank{1});
    m.cmax_edges = c.edge_count();
    const DiameterResult diam = diameter(c, plan.exact_diameter_threshold);
    m.diameter = diam.value;
    m.diameter_exact = diam.exact;
    if (plan.stats.mixing && c.size() <= plan.mixing_exact_cap) {
      const MixingResult mix = mixing_time_exact(c, plan.mixing_max_steps, {plan.mixing_exact_cap, false});
      m.tmix = mix.t_mix;
      m.tmix_exact = mix.exact;
      if (diam.exact) m.tmix_upper = mixing_time_upper_edge_diam(c, diam).t_mix;
    }
  }
  return m;
}

namespace {

double bootstrap_median_se(const std::vector<double>& values, std::uint64_t seed, int rounds = 200) {
  if (values.size() < 2) return 0.0;
  std::vector<double> medians, resampled(values.size());
  for (int b = 0; b < rounds; ++b) {
    CounterRng rng(hash_key(seed, static_cast<std::uint64_t>(b)));
    for (auto& r : resampled) r = values[static_cast<std::size_t>(rng() % values.size())];
    medians.push_back(median(resampled));
  }
  return std::sqrt(sample_variance(medians));
}

void emit_size(const SweepPlan& plan, std::size_t index, const SizeResult& s, const RecordSink& sink) {
  if (!sink) return;
  const std::int64_t R = static_cast<std::int64_t>(s.replicates.size());
  const std::uint64_t stat_seed = hash_key(plan.seed, index, 0x626f6f74ULL);
  auto base = [&](const std::string& type, const std::string& statistic) {
    Record r;
    r.record_type = type;
    r.spec = s.spec;
    r.p = s.p;
    if (plan.policy.kind == PPolicy::Kind::Critical) r.lambda = plan.policy.lambda;
    r.seed = plan.seed;
    r.replicates = R;
    r.statistic = statistic;
    r.flags = spec_flags(s.spec);
    return r;
  };
  auto estimate = [&](const std::string& statistic, const Estimate& e) {
    Record r = base("estimate", statistic);
    r.value = e.value;
    r.std_error = e.std_error;
    return r;
  };

  if (s.critical) {
    Record r = base("critical_point", "p_hat");
    r.value = s.critical->p_hat;
    r.std_error = 0.5 * (s.critical->ci.second - s.critical->ci.first);
    r.replicates = s.critical->budget_used;
    if (s.critical->budget_exhausted) r.flags.emplace_back("budget-exhausted");
    r.spec_hash = spec_hash(s.spec);
    r.extra = {{"ci_lo", s.critical->ci.first},
               {"ci_hi", s.critical->ci.second},
               {"target_chi", s.critical->target_chi},
               {"halvings", static_cast<double>(s.critical->halvings)}};
    sink(r);
  }
  if (plan.stats.chi) {
    std::vector<double> chi;
    for (const auto& m : s.replicates) chi.push_back(m.chi);
    sink(estimate("chi", mean_estimate(chi)));
  }
  if (plan.stats.cmax) {
    const std::vector<double> cmax = s.cmax_samples();
    sink(estimate("cmax_mean", mean_estimate(cmax)));
    sink(estimate("cmax_median", {median(cmax), bootstrap_median_se(cmax, stat_seed), R}));
    Record cv = base("estimate", "cmax_rescaled_cv");
    cv.value = coefficient_of_variation(s.rescaled_cmax());
    sink(cv);
    for (double level : report_quantile_levels()) {
      Record q = base("estimate", "cmax_rescaled_quantile");
      q.value = quantile(s.rescaled_cmax(), level);
      q.extra = {{"level", level}};
      sink(q);
    }
  }
  if (plan.stats.tail) {
    for (std::size_t j = 0; j < s.ks.size(); ++j) {
      Record r = estimate("tail", s.tail.probs[j]);
      r.k = s.ks[j];
      sink(r);
    }
  }
  for (Index i = 1; i <= plan.stats.ranks; ++i) {
    std::vector<double> sizes = s.ranked_samples(i);
    Record mean_rec = estimate("ordered_mean", mean_estimate(sizes));
    mean_rec.rank = i;
    sink(mean_rec);
    std::vector<double> rescaled = sizes;
    for (double& x : rescaled) x /= s.scale();
    Record med = base("estimate", "ordered_median_rescaled");
    med.rank = i;
    med.value = median(rescaled);
    med.std_error = bootstrap_median_se(rescaled, hash_key(stat_seed, static_cast<std::uint64_t>(i)));
    sink(med);
    Record absent = base("estimate", "ordered_absent");
    absent.rank = i;
    absent.value = static_cast<double>(std::count(sizes.begin(), sizes.end(), 0.0));
    sink(absent);
  }
  if (plan.stats.diameter || plan.stats.mixing) {
    const std::vector<double> diam = s.diameter_samples();
    Record r = base("estimate", "diameter_median");
    r.value = median(diam);
    r.std_error = bootstrap_median_se(diam, hash_key(stat_seed, 0x64ULL));
    if (s.inexact_diameters() > 0) r.flags.emplace_back("diameter-lower-bound");
    r.extra = {{"inexact", static_cast<double>(s.inexact_diameters())}};
    sink(r);
  }
  if (plan.stats.mixing) {
    const std::vector<double> tmix = s.tmix_samples();
    Record r = base("estimate", "tmix_median");
    r.replicates = static_cast<std::int64_t>(tmix.size());
    r.value = tmix.empty() ? NAN : median(tmix);
    r.std_error = bootstrap_median_se(tmix, hash_key(stat_seed, 0x74ULL));
    if (static_cast<std::int64_t>(tmix.size()) < R) r.flags.emplace_back("tmix-partial");
    r.extra = {{"sandwich_violations", static_cast<double>(s.sandwich_violations())}};
    sink(r);
  }
  if (plan.persist_samples) {
    for (std::int64_t i = 0; i < R; ++i) {
      const auto& m = s.replicates[static_cast<std::size_t>(i)];
      auto sample = [&](const std::string& statistic, double value, std::optional<Index> rank = std::nullopt) {
        Record r = base("sample", statistic);
        r.value = value;
        r.rank = rank;
        r.extra = {{"replicate", static_cast<double>(i)}};
        sink(r);
      };
      sample("cmax", static_cast<double>(m.cmax));
      for (Index k = 1; k <= plan.stats.ranks; ++k)
        sample("ordered", static_cast<double>(m.ranked[static_cast<std::size_t>(k - 1)]), k);
      if (m.diameter >= 0) sample("diameter", static_cast<double>(m.diameter));
      if (m.tmix >= 0 && m.tmix_exact) sample("tmix", static_cast<double>(m.tmix));
    }
  }
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const RecordSink& sink) {
  validate(plan);
  SweepResult result;
  for (std::size_t i = 0; i < plan.sizes.size(); ++i) {
    SizeResult s;
    s.spec = plan.sizes[i];
    auto graph = make_graph(s.spec);
    s.vertices = graph->vertex_count();
    if (plan.policy.kind == PPolicy::Kind::Fixed) {
      s.p = plan.policy.fixed.size() == 1 ? plan.policy.fixed[0] : plan.policy.fixed[i];
    } else {
      const double tolerance = plan.policy.tolerance_windows * window_scale(s.spec);
      s.critical = find_pc(s.spec, plan.policy.lambda, tolerance, plan.policy.budget,
                           hash_key(plan.seed, 0x7063ULL));
      s.p = s.critical->p_hat;
    }
    s.ks = geometric_k_grid(s.vertices);
    s.replicates = map_replicates<ReplicateMeasure>(
        graph, s.p, plan.seed, 0, plan.replicates,
        [&](const BondConfig& config, const ClusterLabeling& labeling) {
          return measure_replicate(config, labeling, s.ks, plan);
        });
    if (plan.stats.tail) {
      s.tail.ks = s.ks;
      std::vector<double> column(s.replicates.size());
      for (std::size_t j = 0; j < s.ks.size(); ++j) {
        for (std::size_t r = 0; r < column.size(); ++r)
          column[r] = static_cast<double>(s.replicates[r].z[j]) / static_cast<double>(s.vertices);
        s.tail.probs.push_back(mean_estimate(column));
      }
    }
    emit_size(plan, i, s, sink);
    result.sizes.push_back(std::move(s));
  }
  return result;
}

}  // namespace perc

#include "perc/critical.hpp"

#include <algorithm>
#include <cmath>

#include "perc/error.hpp"

namespace perc {

double window_scale(const GraphSpec& spec) {
  const double V = static_cast<double>(vertex_count(spec));
  return 1.0 / (static_cast<double>(underlying_degree(spec)) * std::cbrt(V));
}

double target_chi(const GraphSpec& spec, double lambda) {
  return lambda * std::cbrt(static_cast<double>(vertex_count(spec)));
}

CriticalPoint find_pc(const GraphSpec& spec, double lambda, double tolerance, std::int64_t budget,
                      std::uint64_t seed, const FindPcOptions& options) {
  require(lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
  require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  require(budget >= options.min_replicates, ErrorCode::InvalidArgument,
          "budget below the minimum schedule of " + std::to_string(options.min_replicates));

  CriticalPoint out;
  out.lambda = lambda;
  out.target_chi = target_chi(spec, lambda);
  auto graph = make_graph(spec);
  const double V = static_cast<double>(graph->vertex_count());

  // chi(0) = 1 exactly; every family here is connected, so chi(1) = V.
  if (out.target_chi <= 1.0) {
    out.chi_lo = out.chi_hi = {1.0, 0.0, 1};
    return out;
  }
  require(V >= out.target_chi, ErrorCode::TargetUnreachable,
          "chi(1) = V = " + std::to_string(V) + " is below the target " + std::to_string(out.target_chi));

  enum class Side { Below, Above, Unknown };
  // Evaluates chi at p with at least `want` replicates, extending the sample
  // until its CI excludes the target or the budget runs out.
  auto classify = [&](double p, std::int64_t want) {
    std::vector<double> samples;
    while (true) {
      const std::int64_t take = std::min<std::int64_t>(want - static_cast<std::int64_t>(samples.size()),
                                                       budget - out.budget_used);
      if (take <= 0) {
        out.budget_exhausted = true;
        return Side::Unknown;
      }
      auto more = chi_samples(graph, p, seed, static_cast<std::int64_t>(samples.size()), take);
      samples.insert(samples.end(), more.begin(), more.end());
      out.budget_used += take;
      const Estimate est = mean_estimate(samples);
      if (est.hi(options.z) < out.target_chi) {
        out.chi_lo = est;
        return Side::Below;
      }
      if (est.lo(options.z) > out.target_chi) {
        out.chi_hi = est;
        return Side::Above;
      }
      want = 2 * static_cast<std::int64_t>(samples.size());
    }
  };

  double lo = 0.0, hi = 1.0;
  out.chi_lo = {1.0, 0.0, 1};
  out.chi_hi = {V, 0.0, 1};

  // Bracketing: walk down from 2/Omega by halving. Sparse graphs put the root
  // near 1/Omega, and probing p = 1/2 there would be needlessly expensive.
  const double omega = static_cast<double>(graph->degree());
  for (double probe = std::min(1.0, 2.0 / omega); probe < hi && probe > tolerance; probe *= 0.5) {
    const Side side = classify(probe, options.min_replicates);
    if (side == Side::Above) {
      hi = probe;
    } else {
      if (side == Side::Below) lo = probe;
      break;
    }
  }

  int level = 0;
  while (hi - lo > tolerance && !out.budget_exhausted) {
    const double mid = 0.5 * (lo + hi);
    const Side side = classify(mid, options.min_replicates << std::min(level / options.ramp_every, 30));
    if (side == Side::Below) lo = mid;
    if (side == Side::Above) hi = mid;
    if (side != Side::Unknown) ++out.halvings;
    ++level;
  }
  out.ci = {lo, hi};
  out.p_hat = 0.5 * (lo + hi);
  return out;
}

WindowSweep window_sweep(const GraphSpec& spec, double center, double half_width_multiples, int points,
                         std::int64_t replicates, std::uint64_t seed) {
  check_probability(center);
  require(points >= 3, ErrorCode::InvalidArgument, "window sweep needs at least 3 points");
  require(half_width_multiples >= 0.0, ErrorCode::InvalidArgument, "half width must be nonnegative");
  require(replicates >= 2, ErrorCode::InvalidArgument, "window sweep needs at least 2 replicates");

  WindowSweep sweep;
  sweep.half_width = half_width_multiples * window_scale(spec);
  std::vector<double> grid;
  if (sweep.half_width == 0.0) {
    grid.push_back(center);
  } else {
    for (int i = 0; i < points; ++i) {
      double p = center - sweep.half_width + 2.0 * sweep.half_width * i / (points - 1);
      if (p < 0.0 || p > 1.0) {
        sweep.clipped = true;
        p = std::clamp(p, 0.0, 1.0);
      }
      if (grid.empty() || p > grid.back()) grid.push_back(p);
    }
  }

  auto graph = make_graph(spec);
  const Index V = graph->vertex_count();
  const double Vd = static_cast<double>(V);
  const std::vector<Index> ks = geometric_k_grid(V);
  const std::size_t K = ks.size();
  for (double p : grid) {
    // Row layout: chi sample, |C_max|, then Z_{>=k}/V per k.
    auto rows = map_replicates<std::vector<double>>(
        graph, p, seed, 0, replicates, [&](const BondConfig&, const ClusterLabeling& labeling) {
          std::vector<double> row(2 + K);
          row[0] = sum_squared_sizes(labeling) / Vd;
          row[1] = static_cast<double>(labeling.cmax());
          for (std::size_t j = 0; j < K; ++j) row[2 + j] = static_cast<double>(z_geq(labeling, ks[j])) / Vd;
          return row;
        });
    auto column = [&](std::size_t c) {
      std::vector<double> out(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][c];
      return mean_estimate(out);
    };
    WindowPoint point;
    point.p = p;
    point.chi = column(0);
    point.mean_cmax = column(1);
    point.tail.ks = ks;
    for (std::size_t j = 0; j < K; ++j) point.tail.probs.push_back(column(2 + j));
    sweep.points.push_back(std::move(point));
  }
  return sweep;
}

}  // namespace perc

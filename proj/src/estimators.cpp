#include "perc/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "perc/error.hpp"

namespace perc {

const std::vector<double>& report_quantile_levels() {
  static const std::vector<double> levels{0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};
  return levels;
}

std::vector<Index> geometric_k_grid(Index V) {
  std::vector<Index> ks;
  for (Index k = 1; k < V; k *= 2) ks.push_back(k);
  ks.push_back(V);
  return ks;
}

std::vector<double> chi_samples(const GraphPtr& graph, double p, std::uint64_t seed,
                                std::int64_t first, std::int64_t count) {
  const double V = static_cast<double>(graph->vertex_count());
  return map_replicates<double>(graph, p, seed, first, count,
                                [V](const BondConfig&, const ClusterLabeling& labeling) {
                                  return sum_squared_sizes(labeling) / V;
                                });
}

Estimate estimate_chi(const GraphPtr& graph, double p, std::int64_t replicates, std::uint64_t seed) {
  check_probability(p);
  require(replicates >= 2, ErrorCode::InvalidArgument, "estimate_chi needs at least 2 replicates");
  return mean_estimate(chi_samples(graph, p, seed, 0, replicates));
}

Estimate estimate_chi(const GraphSpec& spec, double p, std::int64_t replicates, std::uint64_t seed) {
  check_probability(p);
  return estimate_chi(make_graph(spec), p, replicates, seed);
}

TailCurve tail_probability(const GraphSpec& spec, double p, const std::vector<Index>& ks,
                           std::int64_t replicates, std::uint64_t seed) {
  check_probability(p);
  require(std::is_sorted(ks.begin(), ks.end()), ErrorCode::InvalidArgument, "ks must be ascending");
  require(replicates >= 1, ErrorCode::InvalidArgument, "need at least one replicate");
  auto graph = make_graph(spec);
  const double V = static_cast<double>(graph->vertex_count());
  auto rows = map_replicates<std::vector<double>>(
      graph, p, seed, 0, replicates, [&](const BondConfig&, const ClusterLabeling& labeling) {
        std::vector<double> z(ks.size());
        for (std::size_t j = 0; j < ks.size(); ++j)
          z[j] = static_cast<double>(z_geq(labeling, ks[j])) / V;
        return z;
      });
  TailCurve curve;
  curve.ks = ks;
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < ks.size(); ++j) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][j];
    curve.probs.push_back(mean_estimate(column));
  }
  return curve;
}

Estimate two_point(const GraphSpec& spec, double p, Vertex x, std::int64_t replicates,
                   std::uint64_t seed) {
  check_probability(p);
  auto graph = make_graph(spec);
  require(x >= 0 && x < graph->vertex_count(), ErrorCode::VertexOutOfRange, "vertex " + std::to_string(x));
  const Vertex o = origin(spec);
  require(x != o, ErrorCode::InvalidArgument, "two_point target must differ from the origin");
  auto hits = map_replicates<double>(graph, p, seed, 0, replicates,
                                     [&](const BondConfig&, const ClusterLabeling& labeling) {
                                       return labeling.connected(o, x) ? 1.0 : 0.0;
                                     });
  return mean_estimate(hits);
}

ZMoments zgeq_moments(const GraphSpec& spec, double p, Index k, std::int64_t replicates,
                      std::uint64_t seed) {
  check_probability(p);
  require(replicates >= 10, ErrorCode::InvalidArgument, "zgeq_moments needs at least 10 replicates");
  require(k >= 1, ErrorCode::InvalidArgument, "k must be positive");
  auto z = map_replicates<double>(make_graph(spec), p, seed, 0, replicates,
                                  [k](const BondConfig&, const ClusterLabeling& labeling) {
                                    return static_cast<double>(z_geq(labeling, k));
                                  });
  std::vector<double> cubes(z.size());
  std::transform(z.begin(), z.end(), cubes.begin(), [](double v) { return v * v * v; });
  // The raw third moment is a plain mean, so its jackknife SE is sd/sqrt(R).
  return {mean_estimate(z), variance_estimate(z), mean_estimate(cubes)};
}

CmaxDistribution cmax_distribution_from(std::vector<double> rescaled, Index V) {
  CmaxDistribution out;
  out.samples = std::move(rescaled);
  for (double level : report_quantile_levels()) out.quantiles.emplace_back(level, quantile(out.samples, level));
  out.coefficient_of_variation = coefficient_of_variation(out.samples);
  out.mean_rescaled = mean_estimate(out.samples);
  const double scale = std::cbrt(static_cast<double>(V) * static_cast<double>(V));
  out.mean_cmax = out.mean_rescaled;
  out.mean_cmax.value *= scale;
  out.mean_cmax.std_error *= scale;
  return out;
}

CmaxDistribution cmax_distribution(const GraphSpec& spec, double p, std::int64_t replicates,
                                   std::uint64_t seed) {
  check_probability(p);
  require(replicates >= 100, ErrorCode::InvalidArgument, "cmax_distribution needs at least 100 replicates");
  auto graph = make_graph(spec);
  const Index V = graph->vertex_count();
  const double scale = std::cbrt(static_cast<double>(V) * static_cast<double>(V));
  auto samples = map_replicates<double>(graph, p, seed, 0, replicates,
                                        [scale](const BondConfig&, const ClusterLabeling& labeling) {
                                          return static_cast<double>(labeling.cmax()) / scale;
                                        });
  return cmax_distribution_from(std::move(samples), V);
}

// --- audits ---------------------------------------------------------------------

std::string_view inequality_name(Inequality which) {
  switch (which) {
    case Inequality::VarianceUpper: return "variance-upper";
    case Inequality::VarianceLower: return "variance-lower";
    case Inequality::ThirdMomentUpper: return "third-moment-upper";
    case Inequality::CmaxUnionBound: return "cmax-union-bound";
    case Inequality::ExponentialTail: return "exponential-tail";
  }
  return "unknown";
}

bool AuditReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.pass; });
}

namespace {

constexpr Inequality kAllInequalities[] = {Inequality::VarianceUpper, Inequality::VarianceLower,
                                           Inequality::ThirdMomentUpper, Inequality::CmaxUnionBound,
                                           Inequality::ExponentialTail};

struct MomentsAtK {
  double tail;      // P(|C| >= k)
  double z_mean;
  double z_var;
  double z_third;
  double cmax_geq;  // P(|C_max| >= k)
};

// (lhs, rhs) of each inequality; lhs <= rhs is the claim.
std::pair<double, double> sides(Inequality which, double V, double chi, double k, const MomentsAtK& m) {
  switch (which) {
    case Inequality::VarianceUpper: return {m.z_var, V * chi};
    case Inequality::VarianceLower: return {V * m.tail * (k - V * m.tail), m.z_var};
    case Inequality::ThirdMomentUpper:
      return {m.z_third, V * chi * chi * chi + 3.0 * m.z_mean * V * chi + m.z_mean * m.z_mean * m.z_mean};
    case Inequality::CmaxUnionBound: return {m.cmax_geq, V / k * m.tail};
    case Inequality::ExponentialTail:
      return {m.tail, std::sqrt(std::numbers::e / k) * std::exp(-k / (2.0 * chi * chi))};
  }
  return {0.0, 0.0};
}

bool applies(Inequality which, double chi, double k) {
  return which != Inequality::ExponentialTail || k >= chi * chi;
}

}  // namespace

AuditReport audit_exact(const ExactReport& r, double tolerance) {
  AuditReport report;
  report.chi = r.chi;
  const double V = static_cast<double>(r.vertices);
  for (Inequality which : kAllInequalities) {
    AuditItem item{which};
    bool first = true;
    for (Index k = 1; k <= r.vertices; ++k) {
      const double kd = static_cast<double>(k);
      if (!applies(which, r.chi, kd)) continue;
      MomentsAtK m{r.tail[k], r.z_mean[k], r.z_variance[k], r.z_third[k], r.p_cmax_geq[k]};
      auto [lhs, rhs] = sides(which, V, r.chi, kd, m);
      const double slack = rhs - lhs;
      const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (slack < -tolerance * scale) item.pass = false;
      if (first || slack < item.worst_slack) {
        item.worst_slack = slack;
        item.worst_k = k;
        first = false;
      }
      ++item.ks_checked;
    }
    report.items.push_back(item);
  }
  return report;
}

AuditReport audit_monte_carlo(const GraphSpec& spec, double p, const std::vector<Index>& ks,
                              std::int64_t replicates, std::uint64_t seed, double z) {
  check_probability(p);
  require(replicates >= 20, ErrorCode::InvalidArgument, "Monte Carlo audit needs at least 20 replicates");
  auto graph = make_graph(spec);
  const double V = static_cast<double>(graph->vertex_count());
  const auto K = static_cast<Eigen::Index>(ks.size());
  // Columns: chi sample, then per k: Z, Z^2, Z^3, 1{|C_max| >= k}.
  auto rows = map_replicates<Eigen::VectorXd>(
      graph, p, seed, 0, replicates, [&](const BondConfig&, const ClusterLabeling& labeling) {
        Eigen::VectorXd row(1 + 4 * K);
        row(0) = sum_squared_sizes(labeling) / V;
        for (Eigen::Index j = 0; j < K; ++j) {
          const double zk = static_cast<double>(z_geq(labeling, ks[static_cast<std::size_t>(j)]));
          row(1 + 4 * j) = zk;
          row(2 + 4 * j) = zk * zk;
          row(3 + 4 * j) = zk * zk * zk;
          row(4 + 4 * j) = labeling.cmax() >= ks[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
        }
        return row;
      });
  const auto R = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd data(R, 1 + 4 * K);
  for (Eigen::Index i = 0; i < R; ++i) data.row(i) = rows[static_cast<std::size_t>(i)].transpose();

  // Grouped jackknife over contiguous replicate blocks.
  const Eigen::Index G = std::min<Eigen::Index>(R, 50);
  Eigen::MatrixXd group_sums = Eigen::MatrixXd::Zero(G, data.cols());
  Eigen::VectorXd group_size = Eigen::VectorXd::Zero(G);
  for (Eigen::Index i = 0; i < R; ++i) {
    group_sums.row(i * G / R) += data.row(i);
    group_size(i * G / R) += 1.0;
  }
  const Eigen::RowVectorXd total = group_sums.colwise().sum();

  auto moments = [&](const Eigen::RowVectorXd& means, double n, Eigen::Index j) {
    const double zm = means(1 + 4 * j);
    const double var = (means(2 + 4 * j) - zm * zm) * n / (n - 1.0);
    return MomentsAtK{zm / V, zm, std::max(0.0, var), means(3 + 4 * j), means(4 + 4 * j)};
  };

  AuditReport report;
  report.monte_carlo = true;
  const Eigen::RowVectorXd full = total / static_cast<double>(R);
  report.chi = full(0);
  for (Inequality which : kAllInequalities) {
    AuditItem item{which};
    bool first = true;
    for (Eigen::Index j = 0; j < K; ++j) {
      const double kd = static_cast<double>(ks[static_cast<std::size_t>(j)]);
      if (!applies(which, report.chi, kd)) continue;
      auto slack_of = [&](const Eigen::RowVectorXd& means, double n) {
        auto [lhs, rhs] = sides(which, V, means(0), kd, moments(means, n, j));
        return rhs - lhs;
      };
      const double slack = slack_of(full, static_cast<double>(R));
      std::vector<double> loo(static_cast<std::size_t>(G));
      for (Eigen::Index g = 0; g < G; ++g) {
        const double n = static_cast<double>(R) - group_size(g);
        loo[static_cast<std::size_t>(g)] = slack_of((total - group_sums.row(g)) / n, n);
      }
      const double se = jackknife_se(loo);
      const double scale = std::max({1.0, std::abs(slack)});
      const double normalized = se > 0.0 ? slack / se : (slack >= -1e-12 * scale ? 0.0 : -INFINITY);
      if (slack < -z * se - 1e-12 * scale) item.pass = false;
      if (first || normalized < item.worst_slack) {
        item.worst_slack = normalized;
        item.worst_k = ks[static_cast<std::size_t>(j)];
        first = false;
      }
      ++item.ks_checked;
    }
    report.items.push_back(item);
  }
  return report;
}

}  // namespace perc

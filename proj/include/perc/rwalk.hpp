#ifndef PERC_RWALK_HPP
#define PERC_RWALK_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <vector>

#include "perc/error.hpp"
#include "perc/geometry.hpp"
#include "perc/percolate.hpp"

namespace perc {

template <typename Scalar>
using SparseKernel = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <typename Scalar>
using Distribution = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Lazy simple random walk on a cluster: stay with probability 1/2, else
/// move to a uniform open neighbour. Rows and columns use local indices.
template <typename Scalar = double>
SparseKernel<Scalar> lazy_kernel(const ClusterSubgraph& c) {
  const Index n = c.size();
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(static_cast<std::size_t>(n + c.adj.size()));
  for (Index x = 0; x < n; ++x) {
    const Index deg = c.local_degree(x);
    if (deg == 0) {
      entries.emplace_back(x, x, Scalar(1));
      continue;
    }
    entries.emplace_back(x, x, Scalar(1) / Scalar(2));
    const Scalar move = Scalar(1) / (Scalar(2) * Scalar(deg));
    for (Index j = c.adj_offsets[x]; j < c.adj_offsets[x + 1]; ++j) entries.emplace_back(x, c.adj[j], move);
  }
  SparseKernel<Scalar> P(n, n);
  P.setFromTriplets(entries.begin(), entries.end());
  return P;
}

/// pi(x) = deg(x) / (2|E|). Throws SingletonCluster when there are no edges.
template <typename Scalar = double>
Distribution<Scalar> stationary(const ClusterSubgraph& c) {
  require(c.edge_count() > 0, ErrorCode::SingletonCluster, "stationary law needs at least one open edge");
  Distribution<Scalar> pi(c.size());
  const Scalar twice_edges = Scalar(2) * Scalar(c.edge_count());
  for (Index x = 0; x < c.size(); ++x) pi(x) = Scalar(c.local_degree(x)) / twice_edges;
  return pi;
}

/// Symmetrisation D^{1/2} P D^{-1/2} of the lazy kernel, D = diag(pi).
template <typename Scalar = double>
SparseKernel<Scalar> symmetrized_kernel(const ClusterSubgraph& c) {
  const Index n = c.size();
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(static_cast<std::size_t>(n + c.adj.size()));
  for (Index x = 0; x < n; ++x) {
    entries.emplace_back(x, x, Scalar(1) / Scalar(2));
    for (Index j = c.adj_offsets[x]; j < c.adj_offsets[x + 1]; ++j) {
      const Index y = c.adj[j];
      entries.emplace_back(x, y, Scalar(1) / (Scalar(2) * std::sqrt(Scalar(c.local_degree(x) * c.local_degree(y)))));
    }
  }
  SparseKernel<Scalar> S(n, n);
  S.setFromTriplets(entries.begin(), entries.end());
  return S;
}

/// Worst-start total variation, max_x (1/2) sum_y |rows(x,y) - pi(y)|.
template <typename Derived, typename PiDerived>
typename Derived::Scalar worst_start_tv(const Eigen::MatrixBase<Derived>& rows,
                                        const Eigen::MatrixBase<PiDerived>& pi) {
  return ((rows.rowwise() - pi.transpose()).cwiseAbs().rowwise().sum()).maxCoeff() / 2;
}

enum class MixingMethod { ExactTV, EdgeDiameterUpper, SpectralEstimate };

std::string_view mixing_method_name(MixingMethod m);

struct MixingResult {
  Index t_mix = 0;
  bool exact = false;
  /// For bounds: false when built from a diameter lower bound.
  bool certified = true;
  MixingMethod method = MixingMethod::ExactTV;
  /// Spectral bracket on t_mix; equals t_mix for the other methods.
  double lower = 0.0;
  double upper = 0.0;
  double beta2 = 0.0;  // spectral only
  std::vector<double> tv_trace;  // worst-start TV after n = 1, 2, ... steps
};

constexpr Index kDefaultMixingExactCap = 2000;
constexpr double kMixingThreshold = 0.25;

struct MixingOptions {
  Index exact_cap = kDefaultMixingExactCap;
  /// Step the distributions one lazy step at a time and keep every
  /// worst-start TV. Without it the first step below 1/4 is found by
  /// galloping plus bisection over spectral evaluations of P^n.
  bool record_trace = false;
};

/// min{n : max_x TV(P^n(x,.), pi) <= 1/4}. Singletons have t_mix = 0. If
/// max_steps is reached first the result is a lower bound with exact = false.
MixingResult mixing_time_exact(const ClusterSubgraph& c, Index max_steps, const MixingOptions& options = {});

/// 8 |E| diam. Uncertified if the diameter is only a lower bound.
MixingResult mixing_time_upper_edge_diam(const ClusterSubgraph& c, const DiameterResult& diam);
MixingResult mixing_time_upper_edge_diam(const ClusterSubgraph& c);

/// Relaxation-time bracket [(t_rel - 1) ln 2, t_rel ln(4/pi_min)], with the
/// second eigenvalue of the lazy kernel found by deflated power iteration.
/// t_mix is reported as the ceiling of the upper end.
MixingResult mixing_time_spectral(const ClusterSubgraph& c, double tolerance,
                                  Index max_iterations = 1'000'000);

}  // namespace perc

#endif  // PERC_RWALK_HPP

#include "perc/rwalk.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numbers>

#include "perc/rng.hpp"

namespace perc {

std::string_view mixing_method_name(MixingMethod m) {
  switch (m) {
    case MixingMethod::ExactTV: return "exact-tv";
    case MixingMethod::EdgeDiameterUpper: return "edge-diameter-upper";
    case MixingMethod::SpectralEstimate: return "spectral-estimate";
  }
  return "unknown";
}

namespace {

MixingResult exact_result(Index t, bool exact) {
  MixingResult r;
  r.t_mix = t;
  r.exact = exact;
  r.method = MixingMethod::ExactTV;
  r.lower = r.upper = static_cast<double>(t);
  return r;
}

MixingResult stepwise(const ClusterSubgraph& c, Index max_steps) {
  const Eigen::VectorXd pi = stationary(c);
  const SparseKernel<double> P = lazy_kernel(c);
  // Row x holds the law after n steps from start x.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(c.size(), c.size());
  MixingResult out = exact_result(0, false);
  for (Index n = 1; n <= max_steps; ++n) {
    rows = rows * P;
    const double tv = worst_start_tv(rows, pi);
    out.tv_trace.push_back(tv);
    if (tv <= kMixingThreshold) {
      out.t_mix = n;
      out.lower = out.upper = static_cast<double>(n);
      out.exact = true;
      return out;
    }
  }
  out.t_mix = max_steps;
  out.lower = out.upper = static_cast<double>(max_steps);
  return out;
}

// Evaluates worst-start TV of P^n through the eigendecomposition of the
// symmetrised kernel, dropping modes whose n-th power is below rounding.
class SpectralTv {
 public:
  explicit SpectralTv(const ClusterSubgraph& c) : pi_(stationary(c)) {
    const Eigen::MatrixXd S = Eigen::MatrixXd(symmetrized_kernel(c));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    sqrt_pi_ = pi_.cwiseSqrt();
    inv_sqrt_pi_ = sqrt_pi_.cwiseInverse();
    const double m = static_cast<double>(pi_.size());
    // Dropping modes with weight below `cut` moves each TV by at most
    // cut * m^{3/2} / sqrt(pi_min) / 2.
    cut_ = 1e-15 * std::sqrt(pi_.minCoeff()) / (m * std::sqrt(m));
  }

  double operator()(Index n) const {
    // The top mode (eigenvalue 1, vector sqrt(pi)) is exactly pi; skip it.
    const Eigen::Index top = values_.size() - 1;
    std::vector<Eigen::Index> keep;
    std::vector<double> weight;
    for (Eigen::Index k = 0; k < top; ++k) {
      const double w = std::pow(std::abs(values_(k)), static_cast<double>(n)) * (values_(k) < 0 && n % 2 ? -1.0 : 1.0);
      if (std::abs(w) > cut_) {
        keep.push_back(k);
        weight.push_back(w);
      }
    }
    if (keep.empty()) return 0.0;
    const auto K = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd U(vectors_.rows(), K), UW(vectors_.rows(), K);
    for (Eigen::Index j = 0; j < K; ++j) {
      U.col(j) = vectors_.col(keep[static_cast<std::size_t>(j)]);
      UW.col(j) = U.col(j) * weight[static_cast<std::size_t>(j)];
    }
    // (P^n - Pi)(x,y) = pi(x)^{-1/2} [U W U^T](x,y) pi(y)^{1/2}
    Eigen::MatrixXd diff = UW * U.transpose();
    diff = inv_sqrt_pi_.asDiagonal() * diff * sqrt_pi_.asDiagonal();
    return diff.cwiseAbs().rowwise().sum().maxCoeff() / 2.0;
  }

 private:
  Eigen::VectorXd pi_, sqrt_pi_, inv_sqrt_pi_, values_;
  Eigen::MatrixXd vectors_;
  double cut_ = 0.0;
};

MixingResult galloping(const ClusterSubgraph& c, Index max_steps) {
  const SpectralTv tv(c);
  // Worst-start TV is nonincreasing in n, so search for the first crossing.
  Index below = 0;  // largest n known to have TV > 1/4
  Index above = 0;  // smallest n known to have TV <= 1/4
  for (Index n = 1;; n *= 2) {
    const Index probe = std::min(n, max_steps);
    if (tv(probe) <= kMixingThreshold) {
      above = probe;
      break;
    }
    below = probe;
    if (probe == max_steps) return exact_result(max_steps, false);
  }
  while (above - below > 1) {
    const Index mid = below + (above - below) / 2;
    if (tv(mid) <= kMixingThreshold) above = mid; else below = mid;
  }
  return exact_result(above, true);
}

}  // namespace

MixingResult mixing_time_exact(const ClusterSubgraph& c, Index max_steps, const MixingOptions& options) {
  require(max_steps >= 1, ErrorCode::InvalidArgument, "max_steps must be at least 1");
  require(c.size() <= options.exact_cap, ErrorCode::InvalidArgument,
          "cluster of " + std::to_string(c.size()) + " vertices exceeds the exact mixing cap " +
              std::to_string(options.exact_cap));
  if (c.edge_count() == 0) return exact_result(0, true);
  return options.record_trace ? stepwise(c, max_steps) : galloping(c, max_steps);
}

MixingResult mixing_time_upper_edge_diam(const ClusterSubgraph& c, const DiameterResult& diam) {
  MixingResult r;
  r.method = MixingMethod::EdgeDiameterUpper;
  r.exact = false;
  r.certified = diam.exact;
  r.t_mix = 8 * c.edge_count() * diam.value;
  r.lower = r.upper = static_cast<double>(r.t_mix);
  return r;
}

MixingResult mixing_time_upper_edge_diam(const ClusterSubgraph& c) {
  return mixing_time_upper_edge_diam(c, diameter(c));
}

MixingResult mixing_time_spectral(const ClusterSubgraph& c, double tolerance, Index max_iterations) {
  require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  const Eigen::VectorXd pi = stationary(c);
  const SparseKernel<double> S = symmetrized_kernel(c);
  const Eigen::VectorXd top = pi.cwiseSqrt();

  Eigen::VectorXd v(c.size());
  CounterRng rng(0x5eedULL);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform() - 0.5;
  auto deflate = [&](Eigen::VectorXd& x) { x -= top.dot(x) * top; };
  deflate(v);

  double beta = 0.0;
  bool converged = false;
  if (v.norm() > 0.0) {
    v.normalize();
    for (Index it = 0; it < max_iterations; ++it) {
      Eigen::VectorXd w = S * v;
      deflate(w);
      const double rayleigh = v.dot(w);
      const double norm = w.norm();
      if (norm == 0.0) {
        beta = 0.0;
        converged = true;
        break;
      }
      beta = rayleigh;
      // Residual of the Ritz pair bounds the distance to an eigenvalue.
      const double residual = (w - rayleigh * v).norm();
      v = w / norm;
      if (residual <= tolerance * std::max(1.0 - rayleigh, 1e-300)) {
        converged = true;
        break;
      }
    }
  } else {
    converged = true;  // only one mode
  }
  require(converged, ErrorCode::NoConvergence,
          "power iteration did not converge in " + std::to_string(max_iterations) + " iterations");

  beta = std::clamp(beta, 0.0, 1.0 - 1e-15);
  const double t_rel = 1.0 / (1.0 - beta);
  MixingResult r;
  r.method = MixingMethod::SpectralEstimate;
  r.exact = false;
  r.beta2 = beta;
  r.lower = std::max(0.0, (t_rel - 1.0) * std::numbers::ln2);
  r.upper = t_rel * std::log(4.0 / pi.minCoeff());
  r.t_mix = static_cast<Index>(std::ceil(r.upper));
  return r;
}

}  // namespace perc

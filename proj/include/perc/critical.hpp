#ifndef PERC_CRITICAL_HPP
#define PERC_CRITICAL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "perc/estimators.hpp"

namespace perc {

/// Located finite-graph critical point: the root of chi(p) = lambda V^{1/3}.
struct CriticalPoint {
  double p_hat = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
  double lambda = 1.0;
  double target_chi = 0.0;
  std::int64_t budget_used = 0;
  bool budget_exhausted = false;
  int halvings = 0;
  /// chi estimates at the final bracket ends, when they were evaluated.
  Estimate chi_lo;
  Estimate chi_hi;
};

struct FindPcOptions {
  std::int64_t min_replicates = 16;  // replicates at the first midpoint
  int ramp_every = 2;                // double the per-midpoint count every this many halvings
  double z = 3.0;                    // CI half-width in standard errors
};

/// Natural width of the critical window, Omega^{-1} V^{-1/3}.
double window_scale(const GraphSpec& spec);

/// lambda V^{1/3}.
double target_chi(const GraphSpec& spec, double lambda);

/// Stochastic bisection on p. A midpoint replaces an end of the bracket only
/// once its chi CI excludes the target; inconclusive midpoints get more
/// replicates until the budget runs out. Every midpoint reuses the replicate
/// keys of `seed`, so chi estimates are coupled monotonically in p.
/// Exhausting the budget is not an error: the bracket is returned with
/// budget_exhausted set.
CriticalPoint find_pc(const GraphSpec& spec, double lambda, double tolerance, std::int64_t budget,
                      std::uint64_t seed, const FindPcOptions& options = {});

struct WindowPoint {
  double p = 0.0;
  Estimate chi;
  Estimate mean_cmax;
  TailCurve tail;
};

struct WindowSweep {
  std::vector<WindowPoint> points;  // strictly increasing p
  bool clipped = false;             // part of the requested grid left [0,1]
  double half_width = 0.0;          // in units of p
};

/// Evenly spaced sweep over center +- half_width_multiples * window_scale.
WindowSweep window_sweep(const GraphSpec& spec, double center, double half_width_multiples, int points,
                         std::int64_t replicates, std::uint64_t seed);

}  // namespace perc

#endif  // PERC_CRITICAL_HPP

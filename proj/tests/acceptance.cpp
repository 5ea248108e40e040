// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every threshold below is fixed; nothing is tuned to the
// outcome of a run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "perc/cli.hpp"
#include "perc/critical.hpp"
#include "perc/estimators.hpp"
#include "perc/harness.hpp"
#include "perc/oracle.hpp"
#include "perc/records.hpp"

using namespace perc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<GraphSpec>& oracle_graphs() {
  static const std::vector<GraphSpec> graphs = {GraphSpec::torus_nn(1, 3), GraphSpec::torus_nn(1, 4),
                                                GraphSpec::complete(4), GraphSpec::hypercube(3)};
  return graphs;
}

constexpr double kOracleP[] = {0.2, 0.5, 0.8};
constexpr std::uint64_t kSeed = 20240601;

// --- 1 ------------------------------------------------------------------------

Verdict oracle_exactness() {
  const auto t0 = Clock::now();
  Index mismatches = 0;
  for (const auto& spec : oracle_graphs()) {
    const ExactCounts counts = enumerate_counts(spec);
    const auto V = static_cast<std::uint64_t>(counts.vertices);
    // Vertex transitivity makes E Z = V P(|C(0)| >= k) an identity between
    // integer count polynomials, independent of p.
    for (Index k = 1; k <= counts.vertices; ++k) {
      const auto& z = counts.z1[static_cast<std::size_t>(k)].coeff;
      const auto& t = counts.origin_tail[static_cast<std::size_t>(k)].coeff;
      if (z.size() != t.size()) ++mismatches;
      for (std::size_t o = 0; o < std::min(z.size(), t.size()); ++o) mismatches += z[o] != V * t[o];
    }
    for (double p : kOracleP) {
      const ExactReport r = evaluate(counts, spec, p);
      for (Index k = 1; k <= r.vertices; ++k) {
        const double lhs = r.z_mean[static_cast<std::size_t>(k)];
        const double rhs = static_cast<double>(r.vertices) * r.tail[static_cast<std::size_t>(k)];
        mismatches += std::abs(lhs - rhs) > 1e-13 * std::max(1.0, rhs);
      }
    }
  }
  const GraphSpec triangle = GraphSpec::torus_nn(1, 3);
  const ExactReport tri = enumerate_exact(triangle, 0.5);
  const double tau = tri.two_point[static_cast<std::size_t>(neighbors(triangle, tri.origin).front())];
  const bool hand = tri.chi == 9.0 / 4.0 && tri.e_cmax == 19.0 / 8.0 && tri.tail[2] == 3.0 / 4.0 && tau == 5.0 / 8.0;
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && hand && elapsed < 1.0,
          fmt("identity mismatches=%lld, triangle chi=%.17g E|Cmax|=%.17g P(|C|>=2)=%.17g tau(0,1)=%.17g, %.3fs",
              static_cast<long long>(mismatches), tri.chi, tri.e_cmax, tri.tail[2], tau, elapsed)};
}

// --- 2 ------------------------------------------------------------------------

Verdict estimator_validation() {
  const auto t0 = Clock::now();
  constexpr std::int64_t N = 100000;
  constexpr double p = 0.5;
  Index compared = 0, failed = 0;
  double worst = 0.0;
  std::string worst_what;
  auto check = [&](const Estimate& e, double exact, const std::string& what) {
    ++compared;
    const double z = e.std_error > 0 ? std::abs(e.value - exact) / e.std_error : 0.0;
    if (z > worst) {
      worst = z;
      worst_what = what;
    }
    if (!e.agrees_with(exact, 3.0)) ++failed;
  };
  for (const auto& spec : oracle_graphs()) {
    const ExactReport r = enumerate_exact(spec, p);
    const Index V = r.vertices;
    const std::string name = spec_json(spec);
    check(estimate_chi(spec, p, N, kSeed), r.chi, name + " chi");
    std::vector<Index> ks;
    for (Index k = 1; k <= V; ++k) ks.push_back(k);
    const TailCurve tail = tail_probability(spec, p, ks, N, kSeed);
    for (std::size_t j = 0; j < ks.size(); ++j)
      check(tail.probs[j], r.tail[static_cast<std::size_t>(ks[j])], name + " tail k=" + std::to_string(ks[j]));
    for (Index k = 1; k <= V; ++k) {
      const ZMoments m = zgeq_moments(spec, p, k, N, kSeed);
      const auto kk = static_cast<std::size_t>(k);
      check(m.mean, r.z_mean[kk], name + " E Z k=" + std::to_string(k));
      check(m.variance, r.z_variance[kk], name + " Var Z k=" + std::to_string(k));
      check(m.third_moment, r.z_third[kk], name + " E Z^3 k=" + std::to_string(k));
    }
    for (Vertex x = 0; x < V; ++x)
      if (x != r.origin) check(two_point(spec, p, x, N, kSeed), r.two_point[static_cast<std::size_t>(x)],
            name + " tau x=" + std::to_string(x));
    const auto ranks = ordered_cluster_stats(spec, p, 2, N, kSeed);
    check(ranks[0].mean_size, r.e_ranked[1], name + " E|C_(1)|");
    check(ranks[1].mean_size, r.e_ranked[2], name + " E|C_(2)|");
  }
  const double elapsed = seconds_since(t0);
  return {failed == 0 && elapsed < 60.0,
          fmt("%lld comparisons at p=0.5, %lld beyond 3 SE, worst %.2f SE (%s), %.1fs", static_cast<long long>(compared),
              static_cast<long long>(failed), worst, worst_what.c_str(), elapsed)};
}

// --- shared torus sweep ---------------------------------------------------------

struct TorusSweep {
  SweepResult result;
  double seconds = 0.0;
};

const TorusSweep& torus_sweep() {
  static const TorusSweep sweep = [] {
    SweepPlan plan;
    for (int r = 3; r <= 6; ++r) plan.sizes.push_back(GraphSpec::torus_nn(7, r));
    plan.policy.kind = PPolicy::Kind::Critical;
    plan.policy.lambda = 1.0;
    plan.replicates = 300;
    plan.seed = kSeed;
    plan.stats.ranks = 3;
    plan.stats.diameter = true;
    const auto t0 = Clock::now();
    TorusSweep s{run_sweep(plan), 0.0};
    s.seconds = seconds_since(t0);
    return s;
  }();
  return sweep;
}

std::vector<SizeSamples> per_size(const std::function<std::vector<double>(const SizeResult&)>& get) {
  std::vector<SizeSamples> out;
  for (const auto& s : torus_sweep().result.sizes) out.push_back({static_cast<double>(s.vertices), get(s)});
  return out;
}

std::string sweep_ps() {
  std::string out;
  for (const auto& s : torus_sweep().result.sizes) {
    out += fmt("%sr=%d p=%.6g%s", out.empty() ? "" : " ", s.spec.r, s.p,
               s.critical && s.critical->budget_exhausted ? "(budget)" : "");
  }
  return out;
}

// --- 3 ------------------------------------------------------------------------

Verdict inequality_suite() {
  Index exact_fail = 0, exact_runs = 0;
  for (const auto& spec : oracle_graphs()) {
    const ExactCounts counts = enumerate_counts(spec);
    for (double p : kOracleP) {
      ++exact_runs;
      exact_fail += !audit_exact(evaluate(counts, spec, p)).all_pass();
    }
  }
  const SizeResult& small = torus_sweep().result.sizes.front();
  const AuditReport mc =
      audit_monte_carlo(small.spec, small.p, geometric_k_grid(small.vertices), 20000, kSeed + 3, 3.0);
  std::string items;
  for (const auto& item : mc.items)
    items += fmt(" %s:%s(%.2f)", std::string(inequality_name(item.which)).c_str(), item.pass ? "ok" : "FAIL",
                 item.worst_slack);
  return {exact_fail == 0 && mc.all_pass() && mc.items.size() == 5,
          fmt("exact %lld/%lld pass; MC on d=7 r=3 at p=%.6g, 20000 reps, min slack/SE:%s",
              static_cast<long long>(exact_runs - exact_fail), static_cast<long long>(exact_runs), small.p,
              items.c_str())};
}

// --- 4 ------------------------------------------------------------------------

Verdict cmax_scaling() {
  const auto data = per_size([](const SizeResult& s) { return s.cmax_samples(); });
  const FitResult fit = fit_exponent(data, Summary::Median, 1000, kSeed);
  std::string medians;
  for (const auto& d : data) medians += fmt(" %.0f", summarize(d.values, Summary::Median));
  const bool reps = std::all_of(data.begin(), data.end(), [](const SizeSamples& d) { return d.values.size() >= 300; });
  return {reps && fit.slope >= 0.60 && fit.slope <= 0.75,
          fmt("slope %.4f CI [%.3f, %.3f]; medians%s; %s; sweep %.0fs", fit.slope, fit.slope_ci.first,
              fit.slope_ci.second, medians.c_str(), sweep_ps().c_str(), torus_sweep().seconds)};
}

// --- 5 ------------------------------------------------------------------------

Verdict tail_scaling() {
  const SizeResult& big = torus_sweep().result.sizes.back();
  const auto [k_lo, k_hi] = default_tail_window(big.vertices, 0.25);
  const FitResult fit = tail_exponent(big.tail, k_lo, k_hi, 1000, kSeed);
  return {fit.slope >= -0.6 && fit.slope <= -0.4,
          fmt("V=%lld window [%lld, %lld], %lld points, slope %.4f CI [%.3f, %.3f]",
              static_cast<long long>(big.vertices), static_cast<long long>(k_lo), static_cast<long long>(k_hi),
              static_cast<long long>(fit.points_used), fit.slope, fit.slope_ci.first, fit.slope_ci.second)};
}

// --- 6 ------------------------------------------------------------------------

Verdict diameter_scaling() {
  const auto data = per_size([](const SizeResult& s) { return s.diameter_samples(); });
  const FitResult fit = fit_exponent(data, Summary::Median, 1000, kSeed);
  Index inexact = 0;
  for (const auto& s : torus_sweep().result.sizes) inexact += s.inexact_diameters();
  std::string medians;
  for (const auto& d : data) medians += fmt(" %.1f", summarize(d.values, Summary::Median));
  return {fit.slope >= 0.23 && fit.slope <= 0.43,
          fmt("slope %.4f CI [%.3f, %.3f]; medians%s; %lld diameters flagged inexact", fit.slope, fit.slope_ci.first,
              fit.slope_ci.second, medians.c_str(), static_cast<long long>(inexact))};
}

// --- 7 ------------------------------------------------------------------------

Verdict mixing_scaling() {
  SweepPlan er;
  for (Index n = 256; n <= 4096; n *= 2) {
    er.sizes.push_back(GraphSpec::erdos_renyi(n));
    er.policy.fixed.push_back(1.0 / static_cast<double>(n));
  }
  er.policy.kind = PPolicy::Kind::Fixed;
  er.stats = {.chi = false, .cmax = true, .tail = false, .ranks = 0, .diameter = false, .mixing = true};
  er.replicates = 100;
  er.seed = kSeed;

  SweepPlan torus = er;
  torus.sizes = {GraphSpec::torus_nn(7, 3), GraphSpec::torus_nn(7, 4)};
  torus.policy = {};
  torus.policy.kind = PPolicy::Kind::Critical;

  Index violations = 0, exact = 0, partial = 0;
  auto fit = [&](const SweepPlan& plan, std::string& medians) {
    const SweepResult result = run_sweep(plan);
    std::vector<SizeSamples> data;
    for (const auto& s : result.sizes) {
      violations += s.sandwich_violations();
      const auto t = s.tmix_samples();
      exact += static_cast<Index>(t.size());
      partial += static_cast<Index>(s.replicates.size() - t.size());
      data.push_back({static_cast<double>(s.vertices), t});
      medians += fmt(" %.0f", summarize(t, Summary::Median));
    }
    // fit_exponent wants three sizes; the torus leg has two, so fit medians.
    std::vector<double> xs, ys;
    for (const auto& d : data) {
      xs.push_back(d.size);
      ys.push_back(summarize(d.values, Summary::Median));
    }
    return fit_loglog(xs, ys, 2);
  };
  std::string er_medians, torus_medians;
  const FitResult er_fit = fit(er, er_medians);
  const FitResult torus_fit = fit(torus, torus_medians);
  const auto in_range = [](const FitResult& f) { return f.slope >= 0.75 && f.slope <= 1.25; };
  return {in_range(er_fit) && in_range(torus_fit) && violations == 0,
          fmt("ER slope %.4f (medians%s); torus d=7 r=3,4 slope %.4f (medians%s); %lld exact t_mix, %lld not exact, "
              "%lld sandwich violations",
              er_fit.slope, er_medians.c_str(), torus_fit.slope, torus_medians.c_str(), static_cast<long long>(exact),
              static_cast<long long>(partial), static_cast<long long>(violations))};
}

// --- 8 ------------------------------------------------------------------------

Verdict ordered_clusters() {
  bool ok = true;
  std::string detail;
  for (Index i = 1; i <= 3; ++i) {
    std::vector<double> xs, means, medians;
    for (const auto& s : torus_sweep().result.sizes) {
      const auto sizes = s.ranked_samples(i);
      double sum = 0.0;
      for (double v : sizes) sum += v;
      xs.push_back(static_cast<double>(s.vertices));
      means.push_back(sum / static_cast<double>(sizes.size()));
      medians.push_back(summarize(sizes, Summary::Median) / s.scale());
    }
    const auto [lo, hi] = std::minmax_element(medians.begin(), medians.end());
    const double band = *hi / *lo;
    const double drift = medians.back() / medians.front();
    const FitResult fit = fit_loglog(xs, means);
    const bool rank_ok = band <= 4.0 && drift <= 2.0 && drift >= 0.5 && fit.slope >= 0.55 && fit.slope <= 0.80;
    ok = ok && rank_ok;
    detail += fmt("%si=%lld band %.2f drift %.2f slope %.4f", detail.empty() ? "" : "; ", static_cast<long long>(i),
                  band, drift, fit.slope);
  }
  return {ok, detail};
}

// --- 9 ------------------------------------------------------------------------

Verdict nonconcentration() {
  const auto data = per_size([](const SizeResult& s) { return s.rescaled_cmax(); });
  const NonconcentrationReport report = nonconcentration_report(data, 200);
  std::string cvs;
  for (const auto& d : report.sizes) cvs += fmt(" %.3f", d.cv);
  return {report.cv_stable && report.cv_floor && !report.degenerate,
          fmt("CV per size%s; ratio largest/smallest %.3f", cvs.c_str(),
              report.sizes.back().cv / report.sizes.front().cv)};
}

// --- 10 -----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "perclab-acceptance";
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--family", "torus-nn", "--d", "7", "--sizes", "3,4", "--reps", "60", "--budget", "4000",
       "--statistics", "chi,cmax,tail,diameter,mixing", "--persist-samples", "true"},
      {"find-pc", "--family", "hypercube", "--d", "10", "--budget", "4000"},
      {"tails", "--family", "erdos-renyi", "--n", "2000", "--p", "0.0005", "--reps", "200", "--x", "7"},
  };
  Index compared = 0, differing = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string first;
    for (const char* workers : {"1", "2", "5"}) {
      const fs::path out = dir / fmt("cmd%zu-w%s.jsonl", c, workers);
      fs::remove(out);
      std::vector<std::string> args = {"perclab", "--workers", workers};
      args.insert(args.end(), commands[c].begin(), commands[c].end());
      args.insert(args.end(), {"--output", out.string()});
      std::ostringstream sout, serr;
      run_cli(args, sout, serr);
      const std::string bytes = slurp(out);
      if (first.empty()) {
        first = bytes;
        differing += bytes.empty();
      } else {
        ++compared;
        differing += bytes != first;
      }
    }
  }
  return {differing == 0, fmt("%lld cross-worker comparisons over %zu commands, %lld differ",
                              static_cast<long long>(compared), commands.size(), static_cast<long long>(differing))};
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
      {"oracle exactness", oracle_exactness},
      {"estimator validation", estimator_validation},
      {"inequality suite", inequality_suite},
      {"largest-cluster scaling", cmax_scaling},
      {"tail exponent", tail_scaling},
      {"diameter scaling", diameter_scaling},
      {"mixing scaling", mixing_scaling},
      {"ordered clusters", ordered_clusters},
      {"non-concentration", nonconcentration},
      {"determinism", determinism},
  };
  int failures = 0;
  std::vector<bool> wanted(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int n = std::atoi(argv[a]);
    if (n >= 1 && n <= static_cast<int>(criteria.size())) wanted[static_cast<std::size_t>(n - 1)] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!wanted[i]) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

#include "perc/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <ostream>

#include "perc/config.hpp"
#include "perc/critical.hpp"
#include "perc/error.hpp"
#include "perc/estimators.hpp"
#include "perc/geometry.hpp"
#include "perc/harness.hpp"
#include "perc/parallel.hpp"
#include "perc/records.hpp"
#include "perc/rwalk.hpp"

namespace perc {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string json_array(const std::vector<double>& xs, std::size_t from = 0) {
  std::string out = "[";
  for (std::size_t i = from; i < xs.size(); ++i) out += (i > from ? "," : "") + format_double(xs[i]);
  return out + "]";
}

/// Where a command's records go: always `out`, and a JSONL file when one is
/// configured.
class Output {
 public:
  Output(const ExperimentConfig& config, const std::string& command, std::ostream& out) : out_(out) {
    path_ = config.output;
    if (path_.empty()) {
      if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
        path_ = (std::filesystem::path(dir) / (command + ".jsonl")).string();
    }
  }

  const std::string& path() const { return path_; }

  void open() {
    if (!path_.empty() && !writer_) writer_ = std::make_unique<JsonlWriter>(path_);
  }

  void record(const Record& r, bool echo = true) {
    open();
    if (writer_) writer_->write(r);
    if (echo) out_ << to_jsonl(r) << '\n';
  }

  RecordSink sink() {
    return [this](const Record& r) { record(r); };
  }

  /// Writes a whole document instead of JSONL (oracle).
  void document(const std::string& text) {
    out_ << text << '\n';
    if (path_.empty()) return;
    std::ofstream f(path_);
    require(static_cast<bool>(f), ErrorCode::ConfigError, "cannot open " + path_ + " for writing");
    f << text << '\n';
  }

 private:
  std::ostream& out_;
  std::string path_;
  std::unique_ptr<JsonlWriter> writer_;
};

void write_sidecar(const std::string& path, const std::string& command, const ExperimentConfig& config,
                   const std::string& started, int exit_code) {
  if (path.empty()) return;
  nlohmann::json meta = {{"command", command},
                         {"started_utc", started},
                         {"finished_utc", utc_now()},
                         {"workers", worker_count()},
                         {"exit_code", exit_code},
                         {"config", serialize_config(config)}};
  std::ofstream f(path + ".meta.json");
  if (f) f << meta.dump(2) << '\n';
}

double require_p(const ExperimentConfig& c) {
  require(c.p.has_value(), ErrorCode::InvalidArgument, "this command needs --p");
  check_probability(*c.p);
  return *c.p;
}

Record base_record(const ExperimentConfig& c, const GraphSpec& spec, double p, const std::string& statistic,
                   std::int64_t replicates) {
  Record r;
  r.record_type = "estimate";
  r.spec = spec;
  r.p = p;
  r.seed = c.seed;
  r.replicates = replicates;
  r.statistic = statistic;
  r.flags = spec_flags(spec);
  return r;
}

Record estimate_record(const ExperimentConfig& c, const GraphSpec& spec, double p, const std::string& statistic,
                       const Estimate& e) {
  Record r = base_record(c, spec, p, statistic, e.replicates);
  r.value = e.value;
  r.std_error = e.std_error;
  return r;
}

std::vector<Index> k_grid(const ExperimentConfig& c, Index V) {
  return c.k.empty() ? geometric_k_grid(V) : c.k;
}

// --- commands ---------------------------------------------------------------

int cmd_sample(const ExperimentConfig& c, Output& out, std::ostream& err) {
  const double p = require_p(c);
  validate(c.graph);
  const GraphSpec& spec = c.graph;
  if (c.reps == 1) {
    const BondConfig config = sample_bonds(spec, p, c.seed, 0);
    const ClusterLabeling labeling = cluster(config);
    auto single = [&](const std::string& statistic, double value, std::optional<Index> rank = std::nullopt) {
      Record r = base_record(c, spec, p, statistic, 1);
      r.record_type = "sample";
      r.value = value;
      r.rank = rank;
      out.record(r);
    };
    single("open_edges", static_cast<double>(config.open.size()));
    single("cluster_count", static_cast<double>(labeling.cluster_count()));
    for (Index i = 1; i <= c.ranks; ++i) single("ordered", static_cast<double>(labeling.ranked_size(i)), i);
    if (c.dump_hex) err << nlohmann::json({{"config_hex", config.to_hex()}}).dump() << '\n';
    return kExitOk;
  }
  const CmaxDistribution dist = cmax_distribution(spec, p, c.reps, c.seed);
  out.record(estimate_record(c, spec, p, "cmax_mean", dist.mean_cmax));
  out.record(estimate_record(c, spec, p, "cmax_rescaled_mean", dist.mean_rescaled));
  Record cv = base_record(c, spec, p, "cmax_rescaled_cv", c.reps);
  cv.value = dist.coefficient_of_variation;
  out.record(cv);
  for (const auto& [level, value] : dist.quantiles) {
    Record q = base_record(c, spec, p, "cmax_rescaled_quantile", c.reps);
    q.value = value;
    q.extra = {{"level", level}};
    out.record(q);
  }
  for (const RankStats& s : ordered_cluster_stats(spec, p, c.ranks, c.reps, c.seed)) {
    Record mean_rec = estimate_record(c, spec, p, "ordered_mean", s.mean_size);
    mean_rec.rank = s.rank;
    out.record(mean_rec);
    Record med = base_record(c, spec, p, "ordered_median_rescaled", c.reps);
    med.rank = s.rank;
    med.value = median(s.rescaled);
    out.record(med);
    Record absent = base_record(c, spec, p, "ordered_absent", c.reps);
    absent.rank = s.rank;
    absent.value = static_cast<double>(s.absent);
    out.record(absent);
  }
  return kExitOk;
}

int cmd_chi(const ExperimentConfig& c, Output& out) {
  const double p = require_p(c);
  validate(c.graph);
  out.record(estimate_record(c, c.graph, p, "chi", estimate_chi(c.graph, p, c.reps, c.seed)));
  return kExitOk;
}

int cmd_tails(const ExperimentConfig& c, Output& out) {
  const double p = require_p(c);
  validate(c.graph);
  const Index V = vertex_count(c.graph);
  const std::vector<Index> ks = k_grid(c, V);
  const TailCurve curve = tail_probability(c.graph, p, ks, c.reps, c.seed);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    Record r = estimate_record(c, c.graph, p, "tail", curve.probs[i]);
    r.k = ks[i];
    out.record(r);
  }
  if (c.x != origin(c.graph)) {
    Record r = estimate_record(c, c.graph, p, "two_point", two_point(c.graph, p, c.x, c.reps, c.seed));
    r.extra = {{"x", static_cast<double>(c.x)}};
    out.record(r);
  }
  if (c.reps >= 10) {
    for (Index k : ks) {
      const ZMoments z = zgeq_moments(c.graph, p, k, c.reps, c.seed);
      for (const auto& [name, e] : {std::pair{"z_mean", z.mean}, std::pair{"z_variance", z.variance},
                                    std::pair{"z_third_moment", z.third_moment}}) {
        Record r = estimate_record(c, c.graph, p, name, e);
        r.k = k;
        out.record(r);
      }
    }
  }
  return kExitOk;
}

Record critical_record(const ExperimentConfig& c, const GraphSpec& spec, const CriticalPoint& cp) {
  Record r = base_record(c, spec, cp.p_hat, "p_hat", cp.budget_used);
  r.record_type = "critical_point";
  r.lambda = cp.lambda;
  r.value = cp.p_hat;
  r.std_error = 0.5 * (cp.ci.second - cp.ci.first);
  if (cp.budget_exhausted) r.flags.emplace_back("budget-exhausted");
  r.spec_hash = spec_hash(spec);
  r.extra = {{"ci_lo", cp.ci.first},
             {"ci_hi", cp.ci.second},
             {"target_chi", cp.target_chi},
             {"halvings", static_cast<double>(cp.halvings)}};
  return r;
}

int cmd_find_pc(const ExperimentConfig& c, Output& out) {
  validate(c.graph);
  const double tolerance = c.tolerance * window_scale(c.graph);
  const CriticalPoint cp = find_pc(c.graph, c.lambda, tolerance, c.budget, c.seed);
  out.record(critical_record(c, c.graph, cp));
  return cp.budget_exhausted ? kExitBudget : kExitOk;
}

int cmd_sweep(const ExperimentConfig& c, Output& out) {
  require(!c.sizes.empty(), ErrorCode::InvalidArgument, "sweep needs --sizes");
  SweepPlan plan;
  for (Index s : c.sizes) plan.sizes.push_back(spec_at_size(c.graph, s));
  if (c.policy == "critical") {
    plan.policy.kind = PPolicy::Kind::Critical;
    plan.policy.lambda = c.lambda;
    plan.policy.tolerance_windows = c.tolerance;
    plan.policy.budget = c.budget;
  } else if (c.policy == "fixed") {
    plan.policy.kind = PPolicy::Kind::Fixed;
    plan.policy.fixed = c.p_list;
    if (plan.policy.fixed.empty() && c.p) plan.policy.fixed = {*c.p};
  } else {
    throw Error(ErrorCode::InvalidArgument, "policy must be 'critical' or 'fixed', got '" + c.policy + "'");
  }
  plan.stats = {false, false, false, c.ranks, false, false};
  for (const std::string& s : c.statistics) {
    if (s == "chi") plan.stats.chi = true;
    else if (s == "cmax") plan.stats.cmax = true;
    else if (s == "tail") plan.stats.tail = true;
    else if (s == "diameter") plan.stats.diameter = true;
    else if (s == "mixing") plan.stats.mixing = true;
    else throw Error(ErrorCode::InvalidArgument, "unknown sweep statistic '" + s + "'");
  }
  plan.replicates = c.reps;
  plan.seed = c.seed;
  plan.exact_diameter_threshold = c.diameter_threshold;
  plan.mixing_exact_cap = c.exact_cap;
  plan.mixing_max_steps = c.max_steps;
  plan.persist_samples = c.persist_samples;
  const SweepResult result = run_sweep(plan, out.sink());
  for (const auto& s : result.sizes)
    if (s.critical && s.critical->budget_exhausted) return kExitBudget;
  return kExitOk;
}

int cmd_diam(const ExperimentConfig& c, Output& out) {
  const double p = require_p(c);
  validate(c.graph);
  require(c.reps >= 1, ErrorCode::InvalidArgument, "reps must be at least 1");
  auto graph = make_graph(c.graph);
  struct Row {
    Index diameter;
    bool exact;
  };
  const Index threshold = c.diameter_threshold;
  const Index rank = c.rank;
  const auto rows = map_replicates<Row>(graph, p, c.seed, 0, c.reps,
                                        [&](const BondConfig& config, const ClusterLabeling& labeling) {
                                          const DiameterResult d =
                                              diameter(extract_cluster(config, labeling, ByRank{rank}), threshold);
                                          return Row{d.value, d.exact};
                                        });
  std::vector<double> values;
  Index inexact = 0;
  for (const Row& r : rows) {
    values.push_back(static_cast<double>(r.diameter));
    inexact += r.exact ? 0 : 1;
  }
  Record med = base_record(c, c.graph, p, "diameter_median", c.reps);
  med.rank = rank;
  med.value = median(values);
  if (inexact > 0) med.flags.emplace_back("diameter-lower-bound");
  med.extra = {{"inexact", static_cast<double>(inexact)}};
  out.record(med);
  Record mean_rec = estimate_record(c, c.graph, p, "diameter_mean", mean_estimate(values));
  mean_rec.rank = rank;
  mean_rec.flags = med.flags;
  out.record(mean_rec);
  return kExitOk;
}

int cmd_mix(const ExperimentConfig& c, Output& out) {
  const double p = require_p(c);
  validate(c.graph);
  require(c.reps >= 1, ErrorCode::InvalidArgument, "reps must be at least 1");
  const bool want_exact = c.method == "all" || c.method == "exact";
  const bool want_upper = c.method == "all" || c.method == "upper";
  const bool want_spectral = c.method == "all" || c.method == "spectral";
  require(want_exact || want_upper || want_spectral, ErrorCode::InvalidArgument,
          "method must be exact, upper, spectral or all");
  auto graph = make_graph(c.graph);
  struct Row {
    Index exact = -1;
    bool exact_done = false;
    bool capped = false;
    Index upper = -1;
    double spec_lo = NAN, spec_hi = NAN;
  };
  const auto rows = map_replicates<Row>(
      graph, p, c.seed, 0, c.reps, [&](const BondConfig& config, const ClusterLabeling& labeling) {
        const ClusterSubgraph cl = extract_cluster(config, labeling, ByRank{c.rank});
        Row row;
        const DiameterResult diam = diameter(cl, c.diameter_threshold);
        if (want_upper) row.upper = mixing_time_upper_edge_diam(cl, diam).t_mix;
        if (want_exact && cl.size() <= c.exact_cap) {
          const MixingResult m = mixing_time_exact(cl, c.max_steps, {c.exact_cap, false});
          row.exact = m.t_mix;
          row.exact_done = m.exact;
          row.capped = !m.exact;
        }
        if (want_spectral && cl.size() > 1) {
          const MixingResult m = mixing_time_spectral(cl, 1e-10);
          row.spec_lo = m.lower;
          row.spec_hi = m.upper;
        }
        return row;
      });
  std::vector<double> exact, upper, lo, hi;
  Index violations = 0, capped = 0, skipped = 0;
  for (const Row& r : rows) {
    if (r.exact_done) exact.push_back(static_cast<double>(r.exact));
    if (r.capped) ++capped;
    if (want_exact && r.exact < 0) ++skipped;
    if (r.upper >= 0) upper.push_back(static_cast<double>(r.upper));
    if (r.exact_done && r.upper >= 0 && r.exact > r.upper) ++violations;
    if (std::isfinite(r.spec_lo)) {
      lo.push_back(r.spec_lo);
      hi.push_back(r.spec_hi);
    }
  }
  auto median_record = [&](const std::string& statistic, const std::vector<double>& v) {
    Record r = base_record(c, c.graph, p, statistic, static_cast<std::int64_t>(v.size()));
    r.rank = c.rank;
    r.value = v.empty() ? NAN : median(v);
    return r;
  };
  if (want_exact) {
    Record r = median_record("tmix_median", exact);
    r.extra = {{"skipped_over_cap", static_cast<double>(skipped)}, {"step_limit_hit", static_cast<double>(capped)}};
    if (want_upper) r.extra.emplace_back("sandwich_violations", static_cast<double>(violations));
    out.record(r);
  }
  if (want_upper) out.record(median_record("tmix_upper_edge_diam_median", upper));
  if (want_spectral) {
    out.record(median_record("tmix_spectral_lower_median", lo));
    out.record(median_record("tmix_spectral_upper_median", hi));
  }
  return capped > 0 ? kExitBudget : kExitOk;
}

int cmd_oracle(const ExperimentConfig& c, Output& out) {
  const double p = require_p(c);
  out.document(exact_report_json(enumerate_exact(c.graph, p)));
  return kExitOk;
}

Record fit_record(const ExperimentConfig& c, const Record& like, const std::string& statistic, const FitResult& f) {
  Record r = like;
  r.record_type = "fit";
  r.statistic = statistic;
  r.k.reset();
  r.value = f.slope;
  r.std_error = 0.5 * (f.slope_ci.second - f.slope_ci.first);
  r.replicates = c.bootstrap;
  r.spec_hash.reset();
  r.extra = {{"intercept", f.intercept},
             {"r_squared", f.r_squared},
             {"ci_lo", f.slope_ci.first},
             {"ci_hi", f.slope_ci.second},
             {"points_used", static_cast<double>(f.points_used)}};
  return r;
}

int cmd_fit(const ExperimentConfig& c, Output& out) {
  require(!c.input.empty(), ErrorCode::InvalidArgument, "fit needs --input");
  const std::vector<Record> records = read_jsonl(c.input);
  require(!records.empty(), ErrorCode::InsufficientPoints, "no records in " + c.input);
  if (c.statistic == "tail") {
    // Tail exponent on the largest graph present.
    Index best_v = -1;
    for (const Record& r : records)
      if (r.statistic == "tail" && r.k) best_v = std::max(best_v, vertex_count(r.spec));
    require(best_v > 0, ErrorCode::InsufficientPoints, "no tail records in " + c.input);
    TailCurve curve;
    const Record* like = nullptr;
    for (const Record& r : records) {
      if (r.statistic != "tail" || !r.k || vertex_count(r.spec) != best_v) continue;
      curve.ks.push_back(*r.k);
      curve.probs.push_back({r.value, r.std_error, r.replicates});
      like = &r;
    }
    auto [lo, hi] = default_tail_window(best_v, c.tail_fraction);
    if (c.k.size() == 2) std::tie(lo, hi) = std::pair{c.k[0], c.k[1]};
    const FitResult f = tail_exponent(curve, lo, hi, c.bootstrap, c.seed);
    Record r = fit_record(c, *like, "tail_exponent", f);
    r.extra.emplace_back("k_lo", static_cast<double>(lo));
    r.extra.emplace_back("k_hi", static_cast<double>(hi));
    out.record(r);
    return kExitOk;
  }
  require(c.summary == "median" || c.summary == "mean", ErrorCode::InvalidArgument,
          "summary must be median or mean");
  const bool ranked = c.statistic.rfind("ordered", 0) == 0;
  const std::optional<Index> rank = ranked ? std::optional<Index>(c.rank) : std::nullopt;
  const FitResult f = fit_exponent(records, c.statistic, rank,
                                   c.summary == "median" ? Summary::Median : Summary::Mean, c.bootstrap, c.seed);
  const Record* like = &records.back();
  for (const Record& r : records)
    if (r.statistic == c.statistic && (!like || vertex_count(r.spec) >= vertex_count(like->spec))) like = &r;
  Record r = fit_record(c, *like, "slope_" + c.statistic, f);
  r.rank = rank;
  out.record(r);
  return kExitOk;
}

int cmd_audit(const ExperimentConfig& c, Output& out, std::ostream& text) {
  const double p = require_p(c);
  validate(c.graph);
  AuditReport report;
  if (edge_count(c.graph) <= kOracleMaxEdges) {
    report = audit_exact(enumerate_exact(c.graph, p));
  } else {
    report = audit_monte_carlo(c.graph, p, k_grid(c, vertex_count(c.graph)), c.reps, c.seed);
  }
  const std::string mode = report.monte_carlo ? "monte-carlo" : "exact";
  for (const AuditItem& item : report.items) {
    text << (item.pass ? "PASS " : "FAIL ") << inequality_name(item.which) << " (" << mode
         << ", worst slack " << format_double(item.worst_slack) << " at k=" << item.worst_k << ")\n";
    Record r = base_record(c, c.graph, p, "audit_" + std::string(inequality_name(item.which)),
                           report.monte_carlo ? c.reps : 0);
    r.record_type = "audit";
    r.value = item.worst_slack;
    r.k = item.worst_k;
    r.flags.push_back(item.pass ? "pass" : "fail");
    r.flags.push_back(mode);
    r.extra = {{"ks_checked", static_cast<double>(item.ks_checked)}, {"chi", report.chi}};
    out.record(r, false);
  }
  return report.all_pass() ? kExitOk : kExitAuditFailed;
}

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << nlohmann::json({{"error", {{"code", code}, {"message", message}}}}).dump() << '\n';
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::NoConvergence ? kExitBudget : kExitValidation;
}

}  // namespace

std::string exact_report_json(const ExactReport& r) {
  // Per-k arrays start at k = 1.
  std::string out = "{\"spec\":" + spec_json(r.spec);
  out += ",\"p\":" + format_double(r.p);
  out += ",\"vertices\":" + std::to_string(r.vertices);
  out += ",\"edges\":" + std::to_string(r.edges);
  out += ",\"origin\":" + std::to_string(r.origin);
  out += ",\"chi\":" + format_double(r.chi);
  out += ",\"e_cmax\":" + format_double(r.e_cmax);
  out += ",\"tail\":" + json_array(r.tail, 1);
  out += ",\"z_mean\":" + json_array(r.z_mean, 1);
  out += ",\"z_variance\":" + json_array(r.z_variance, 1);
  out += ",\"z_third\":" + json_array(r.z_third, 1);
  out += ",\"p_cmax_geq\":" + json_array(r.p_cmax_geq, 1);
  out += ",\"e_ranked\":" + json_array(r.e_ranked, 1);
  out += ",\"two_point\":" + json_array(r.two_point);
  return out + "}";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"perclab: bond percolation experiments on finite transitive graphs"};
  app.require_subcommand(1);
  std::string config_path;
  unsigned workers = 1;
  app.add_option("--config", config_path, "Config file; flags override its keys");
  app.add_option("--workers", workers, "Worker threads (0 = all cores); output does not depend on it");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sample", "Sample configurations; cluster sizes, |C_max| and ordered-cluster distributions"},
      {"chi", "Estimate the susceptibility"},
      {"tails", "Estimate P(|C| >= k), Z_{>=k} moments and the two-point function"},
      {"find-pc", "Locate p with chi(p) = lambda V^{1/3}"},
      {"sweep", "Run a size sweep and persist per-size statistics"},
      {"diam", "Intrinsic diameter of the rank-selected cluster"},
      {"mix", "Lazy random walk mixing time of the rank-selected cluster"},
      {"oracle", "Exact values by exhaustive enumeration (at most 24 edges)"},
      {"fit", "Log-log exponent fit over persisted records"},
      {"audit", "Check the five Z_{>=k} inequalities"}};
  std::map<std::string, std::string> raw;
  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (const ConfigKey& key : config_keys())
      sub->add_option("--" + std::string(key.name), raw[key.name],
                      std::string("[") + key.section + "] " + key.type);
    subs.emplace_back(sub, name);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "UsageError", e.what());
    return kExitValidation;
  }

  std::string command;
  CLI::App* chosen = nullptr;
  for (const auto& [sub, name] : subs)
    if (sub->parsed()) {
      command = name;
      chosen = sub;
    }

  ExperimentConfig config;
  const std::string started = utc_now();
  std::unique_ptr<Output> output;
  int code = kExitOk;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    for (const ConfigKey& key : config_keys())
      if (chosen->count("--" + std::string(key.name)) > 0) set_config_value(config, key.name, raw[key.name]);
    set_worker_count(workers);
    output = std::make_unique<Output>(config, command, out);
    if (command == "sample") code = cmd_sample(config, *output, err);
    else if (command == "chi") code = cmd_chi(config, *output);
    else if (command == "tails") code = cmd_tails(config, *output);
    else if (command == "find-pc") code = cmd_find_pc(config, *output);
    else if (command == "sweep") code = cmd_sweep(config, *output);
    else if (command == "diam") code = cmd_diam(config, *output);
    else if (command == "mix") code = cmd_mix(config, *output);
    else if (command == "oracle") code = cmd_oracle(config, *output);
    else if (command == "fit") code = cmd_fit(config, *output);
    else if (command == "audit") code = cmd_audit(config, *output, out);
  } catch (const Error& e) {
    print_error(err, std::string(to_string(e.code())), e.what());
    code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    code = kExitValidation;
  }
  if (output) write_sidecar(output->path(), command, config, started, code);
  return code;
}

}  // namespace perc

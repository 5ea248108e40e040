#ifndef PERC_CONFIG_HPP
#define PERC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perc/graphs.hpp"

namespace perc {

constexpr int kConfigVersion = 1;

/// Everything a perclab run depends on. The file format is flat key = value
/// text under [graph], [run], [sweep] and [fit] sections, preceded by a
/// version line; every key has a fixed type and a CLI flag of the same name.
struct ExperimentConfig {
  int version = kConfigVersion;
  GraphSpec graph;

  // [run]
  std::optional<double> p;
  std::uint64_t seed = 1;
  std::int64_t reps = 1000;
  std::int64_t budget = 20000;
  double lambda = 1.0;
  double tolerance = 0.25;  // find-pc tolerance in critical-window units
  std::string output;       // empty: stdout only, or the env default directory
  std::vector<Index> k;     // empty: geometric grid
  Index x = 1;              // two-point target vertex
  Index rank = 1;           // cluster rank used by diam and mix
  std::string method = "all";
  bool dump_hex = false;

  // [sweep]
  std::vector<Index> sizes;  // r for tori and Hamming, d for hypercubes, n otherwise
  std::string policy = "critical";
  std::vector<double> p_list;
  std::vector<std::string> statistics{"chi", "cmax", "tail"};
  Index ranks = 3;
  bool persist_samples = false;
  Index diameter_threshold = 5000;
  Index exact_cap = 2000;
  Index max_steps = 1000000;

  // [fit]
  std::string input;
  std::string statistic = "cmax";
  std::string summary = "median";
  int bootstrap = 1000;
  double tail_fraction = 0.25;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigKey {
  const char* section;
  const char* name;
  const char* type;  // int, uint, real, bool, string, family, ints, reals, words
};

/// Keys in file order.
const std::vector<ConfigKey>& config_keys();

/// Assigns one key from its textual value. File values quote strings; flag
/// values are raw. Throws ConfigError on unknown keys or malformed values.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& text,
                      bool quoted_strings = false);
std::string get_config_value(const ExperimentConfig& config, const std::string& key);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// The spec at one sweep size: `size` replaces r, d or n depending on family.
GraphSpec spec_at_size(const GraphSpec& base, Index size);

}  // namespace perc

#endif  // PERC_CONFIG_HPP

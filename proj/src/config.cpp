#include "perc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "perc/error.hpp"
#include "perc/records.hpp"

namespace perc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const char* type) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "': cannot read '" + text + "' as " + type);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) bad_value(key, text, "integer");
  return value;
}

double parse_real(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) bad_value(key, text, "real");
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true") return true;
  if (text == "false") return false;
  bad_value(key, text, "bool");
}

std::string parse_string(const std::string& key, const std::string& raw, bool quoted) {
  if (!quoted) return raw;
  const std::string text = trim(raw);
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.is_string()) return j.get<std::string>();
  } catch (const nlohmann::json::exception&) {
  }
  bad_value(key, text, "quoted string");
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  const std::string text = trim(raw);
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (text.back() == ',') out.emplace_back();
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

struct Binding {
  ConfigKey key;
  std::function<void(ExperimentConfig&, const std::string&, bool)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Binding int_key(const char* section, const char* name, T ExperimentConfig::*field) {
  return {{section, name, std::is_signed_v<T> ? "int" : "uint"},
          [=](ExperimentConfig& c, const std::string& s, bool) { c.*field = parse_integer<T>(name, s); },
          [=](const ExperimentConfig& c) { return std::to_string(c.*field); }};
}

Binding real_key(const char* section, const char* name, double ExperimentConfig::*field) {
  return {{section, name, "real"},
          [=](ExperimentConfig& c, const std::string& s, bool) { c.*field = parse_real(name, s); },
          [=](const ExperimentConfig& c) { return format_double(c.*field); }};
}

Binding bool_key(const char* section, const char* name, bool ExperimentConfig::*field) {
  return {{section, name, "bool"},
          [=](ExperimentConfig& c, const std::string& s, bool) { c.*field = parse_bool(name, s); },
          [=](const ExperimentConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

Binding string_key(const char* section, const char* name, std::string ExperimentConfig::*field) {
  return {{section, name, "string"},
          [=](ExperimentConfig& c, const std::string& s, bool quoted) { c.*field = parse_string(name, s, quoted); },
          [=](const ExperimentConfig& c) { return nlohmann::json(c.*field).dump(); }};
}

template <typename T>
Binding graph_int_key(const char* name, T GraphSpec::*field) {
  return {{"graph", name, "int"},
          [=](ExperimentConfig& c, const std::string& s, bool) { c.graph.*field = parse_integer<T>(name, s); },
          [=](const ExperimentConfig& c) { return std::to_string(c.graph.*field); }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    using C = ExperimentConfig;
    std::vector<Binding> t;
    t.push_back({{"graph", "family", "family"},
                 [](C& c, const std::string& s, bool) {
                   try {
                     c.graph.family = parse_family(trim(s));
                   } catch (const Error& e) {
                     throw Error(ErrorCode::ConfigError, e.what());
                   }
                   if (c.graph.family == Family::Hypercube) c.graph.r = 2;
                 },
                 [](const C& c) { return std::string(family_name(c.graph.family)); }});
    t.push_back(graph_int_key("d", &GraphSpec::d));
    t.push_back(graph_int_key("r", &GraphSpec::r));
    t.push_back(graph_int_key("L", &GraphSpec::L));
    t.push_back(graph_int_key("n", &GraphSpec::n));

    t.push_back({{"run", "p", "real"},
                 [](C& c, const std::string& s, bool) {
                   if (trim(s).empty()) c.p.reset(); else c.p = parse_real("p", s);
                 },
                 [](const C& c) { return c.p ? format_double(*c.p) : std::string(); }});
    t.push_back(int_key("run", "seed", &C::seed));
    t.push_back(int_key("run", "reps", &C::reps));
    t.push_back(int_key("run", "budget", &C::budget));
    t.push_back(real_key("run", "lambda", &C::lambda));
    t.push_back(real_key("run", "tolerance", &C::tolerance));
    t.push_back(string_key("run", "output", &C::output));
    t.push_back({{"run", "k", "ints"},
                 [](C& c, const std::string& s, bool) {
                   c.k.clear();
                   for (const auto& item : split(s)) c.k.push_back(parse_integer<Index>("k", item));
                 },
                 [](const C& c) { return join(c.k, [](Index v) { return std::to_string(v); }); }});
    t.push_back(int_key("run", "x", &C::x));
    t.push_back(int_key("run", "rank", &C::rank));
    t.push_back(string_key("run", "method", &C::method));
    t.push_back(bool_key("run", "dump-hex", &C::dump_hex));

    t.push_back({{"sweep", "sizes", "ints"},
                 [](C& c, const std::string& s, bool) {
                   c.sizes.clear();
                   for (const auto& item : split(s)) c.sizes.push_back(parse_integer<Index>("sizes", item));
                 },
                 [](const C& c) { return join(c.sizes, [](Index v) { return std::to_string(v); }); }});
    t.push_back(string_key("sweep", "policy", &C::policy));
    t.push_back({{"sweep", "p-list", "reals"},
                 [](C& c, const std::string& s, bool) {
                   c.p_list.clear();
                   for (const auto& item : split(s)) c.p_list.push_back(parse_real("p-list", item));
                 },
                 [](const C& c) { return join(c.p_list, [](double v) { return format_double(v); }); }});
    t.push_back({{"sweep", "statistics", "words"},
                 [](C& c, const std::string& s, bool) {
                   c.statistics = split(s);
                   for (const auto& w : c.statistics)
                     if (w.empty() || w.find_first_of(" \t\"=") != std::string::npos) bad_value("statistics", s, "word list");
                 },
                 [](const C& c) { return join(c.statistics, [](const std::string& w) { return w; }); }});
    t.push_back(int_key("sweep", "ranks", &C::ranks));
    t.push_back(bool_key("sweep", "persist-samples", &C::persist_samples));
    t.push_back(int_key("sweep", "diameter-threshold", &C::diameter_threshold));
    t.push_back(int_key("sweep", "exact-cap", &C::exact_cap));
    t.push_back(int_key("sweep", "max-steps", &C::max_steps));

    t.push_back(string_key("fit", "input", &C::input));
    t.push_back(string_key("fit", "statistic", &C::statistic));
    t.push_back(string_key("fit", "summary", &C::summary));
    t.push_back(int_key("fit", "bootstrap", &C::bootstrap));
    t.push_back(real_key("fit", "tail-fraction", &C::tail_fraction));
    return t;
  }();
  return table;
}

const Binding& binding(const std::string& key) {
  for (const auto& b : bindings())
    if (key == b.key.name) return b;
  throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& b : bindings()) out.push_back(b.key);
    return out;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& text,
                      bool quoted_strings) {
  binding(key).set(config, text, quoted_strings);
}

std::string get_config_value(const ExperimentConfig& config, const std::string& key) {
  return binding(key).get(config);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line, section;
  bool saw_version = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (t.front() == '[') {
      require(t.back() == ']', ErrorCode::ConfigError, where + "malformed section header");
      section = t.substr(1, t.size() - 2);
      require(section == "graph" || section == "run" || section == "sweep" || section == "fit",
              ErrorCode::ConfigError, where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorCode::ConfigError, where + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      require(key == "version", ErrorCode::ConfigError, where + "only 'version' may precede the first section");
      const int version = parse_integer<int>("version", value);
      require(version == kConfigVersion, ErrorCode::UnsupportedVersion,
              "config version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kConfigVersion) + ")");
      saw_version = true;
      continue;
    }
    const Binding& b = binding(key);
    require(section == b.key.section, ErrorCode::ConfigError,
            where + "key '" + key + "' belongs in [" + b.key.section + "]");
    b.set(config, value, true);
  }
  require(saw_version, ErrorCode::ConfigError, "config has no version line");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out = "version = " + std::to_string(config.version) + "\n";
  std::string section;
  for (const auto& b : bindings()) {
    if (section != b.key.section) {
      section = b.key.section;
      out += "\n[" + section + "]\n";
    }
    if (std::string(b.key.name) == "p" && !config.p) continue;
    out += std::string(b.key.name) + " = " + b.get(config) + "\n";
  }
  return out;
}

GraphSpec spec_at_size(const GraphSpec& base, Index size) {
  GraphSpec s = base;
  switch (base.family) {
    case Family::TorusNN:
    case Family::TorusSpread:
    case Family::Hamming: s.r = static_cast<int>(size); break;
    case Family::Hypercube: s.d = static_cast<int>(size); break;
    case Family::Complete:
    case Family::ErdosRenyi: s.n = size; break;
  }
  return s;
}

}  // namespace perc

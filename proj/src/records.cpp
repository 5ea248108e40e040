#include "perc/records.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "perc/error.hpp"
#include "perc/rng.hpp"

namespace perc {

std::optional<double> Record::extra_value(const std::string& key) const {
  for (const auto& [name, v] : extra)
    if (name == key) return v;
  return std::nullopt;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

bool uses_n(Family f) { return f == Family::Complete || f == Family::ErdosRenyi; }

}  // namespace

std::string spec_json(const GraphSpec& s) {
  std::string out = "{\"family\":" + quoted(std::string(family_name(s.family)));
  if (uses_n(s.family)) {
    out += ",\"n\":" + std::to_string(s.n);
  } else {
    out += ",\"d\":" + std::to_string(s.d);
    if (s.family != Family::Hypercube) out += ",\"r\":" + std::to_string(s.r);
    if (s.family == Family::TorusSpread) out += ",\"L\":" + std::to_string(s.L);
  }
  return out + "}";
}

std::string spec_hash(const GraphSpec& s) {
  const std::string canonical = spec_json(s);
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (unsigned char c : canonical) h = hash_key(h, c);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> spec_flags(const GraphSpec& s) {
  std::vector<std::string> flags;
  if (theory_out_of_range(s)) flags.emplace_back("theory-out-of-range");
  if (calibration_only(s)) flags.emplace_back("calibration-only");
  return flags;
}

std::string to_jsonl(const Record& r) {
  std::string out = "{\"record_type\":" + quoted(r.record_type);
  out += ",\"spec\":" + spec_json(r.spec);
  out += ",\"p\":" + format_double(r.p);
  out += ",\"lambda\":" + (r.lambda ? format_double(*r.lambda) : std::string("null"));
  out += ",\"seed\":" + std::to_string(r.seed);
  out += ",\"replicates\":" + std::to_string(r.replicates);
  out += ",\"statistic\":" + quoted(r.statistic);
  if (r.k) out += ",\"k\":" + std::to_string(*r.k);
  if (r.rank) out += ",\"rank\":" + std::to_string(*r.rank);
  out += ",\"value\":" + format_double(r.value);
  out += ",\"std_error\":" + format_double(r.std_error);
  out += ",\"flags\":[";
  for (std::size_t i = 0; i < r.flags.size(); ++i) out += (i ? "," : "") + quoted(r.flags[i]);
  out += "]";
  if (r.spec_hash) out += ",\"spec_hash\":" + quoted(*r.spec_hash);
  for (const auto& [key, v] : r.extra) out += "," + quoted(key) + ":" + format_double(v);
  return out + "}";
}

Record parse_record(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed record: ") + e.what());
  }
  auto number = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  Record r;
  try {
    r.record_type = j.at("record_type").get<std::string>();
    const auto& s = j.at("spec");
    r.spec.family = parse_family(s.at("family").get<std::string>());
    if (s.contains("d")) r.spec.d = s["d"].get<int>();
    if (s.contains("r")) r.spec.r = s["r"].get<int>();
    if (s.contains("L")) r.spec.L = s["L"].get<int>();
    if (s.contains("n")) r.spec.n = s["n"].get<Index>();
    if (r.spec.family == Family::Hypercube) r.spec.r = 2;
    r.p = number(j.at("p"));
    if (!j.at("lambda").is_null()) r.lambda = j["lambda"].get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.replicates = j.at("replicates").get<std::int64_t>();
    r.statistic = j.at("statistic").get<std::string>();
    if (j.contains("k")) r.k = j["k"].get<Index>();
    if (j.contains("rank")) r.rank = j["rank"].get<Index>();
    r.value = number(j.at("value"));
    r.std_error = number(j.at("std_error"));
    for (const auto& f : j.at("flags")) r.flags.push_back(f.get<std::string>());
    if (j.contains("spec_hash")) r.spec_hash = j["spec_hash"].get<std::string>();
    static const char* const kSchema[] = {"record_type", "spec", "p", "lambda", "seed", "replicates",
                                          "statistic", "k", "rank", "value", "std_error", "flags",
                                          "spec_hash"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* key : kSchema) known = known || it.key() == key;
      if (!known) r.extra.emplace_back(it.key(), number(it.value()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("record missing field: ") + e.what());
  }
  return r;
}

std::vector<Record> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open " + path);
  std::vector<Record> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(parse_record(line));
  return out;
}

JsonlWriter::JsonlWriter(const std::string& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc) {
  require(static_cast<bool>(out_), ErrorCode::ConfigError, "cannot open " + path + " for writing");
}

void JsonlWriter::write(const Record& record) {
  out_ << to_jsonl(record) << '\n';
  out_.flush();
}

void write_csv(const std::vector<Record>& records, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  out << "record_type,family,d,r,L,n,V,p,lambda,seed,replicates,statistic,k,rank,value,std_error,flags\n";
  for (const Record& r : records) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    out << r.record_type << ',' << family_name(r.spec.family) << ',' << r.spec.d << ',' << r.spec.r << ','
        << r.spec.L << ',' << r.spec.n << ',' << vertex_count(r.spec) << ',' << format_double(r.p) << ','
        << (r.lambda ? format_double(*r.lambda) : "") << ',' << r.seed << ',' << r.replicates << ','
        << r.statistic << ',' << (r.k ? std::to_string(*r.k) : "") << ','
        << (r.rank ? std::to_string(*r.rank) : "") << ',' << format_double(r.value) << ','
        << format_double(r.std_error) << ',' << flags << '\n';
  }
}

}  // namespace perc

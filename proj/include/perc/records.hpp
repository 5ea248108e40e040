#ifndef PERC_RECORDS_HPP
#define PERC_RECORDS_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perc/graphs.hpp"

namespace perc {

/// One persisted statistic. Serialises to a single JSON line with keys in
/// schema order; every float is printed with 17 significant digits.
struct Record {
  std::string record_type;
  GraphSpec spec;
  double p = 0.0;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::int64_t replicates = 0;
  std::string statistic;
  std::optional<Index> k;
  std::optional<Index> rank;
  double value = 0.0;
  double std_error = 0.0;
  std::vector<std::string> flags;
  /// Set on records meant to be looked up by spec (critical points).
  std::optional<std::string> spec_hash;
  /// Extra numeric fields appended after the schema keys, in order.
  std::vector<std::pair<std::string, double>> extra;

  std::optional<double> extra_value(const std::string& key) const;
};

using RecordSink = std::function<void(const Record&)>;

/// %.17g, with non-finite values written as null.
std::string format_double(double x);

std::string spec_json(const GraphSpec& spec);
/// Stable 64-bit hash of the spec, hex encoded; keys reusable records.
std::string spec_hash(const GraphSpec& spec);

/// Flags every record for this spec carries (theory range, calibration).
std::vector<std::string> spec_flags(const GraphSpec& spec);

std::string to_jsonl(const Record& record);
Record parse_record(const std::string& line);
std::vector<Record> read_jsonl(const std::string& path);

/// Append-only single-writer JSONL file.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path, bool append = false);
  void write(const Record& record);
  RecordSink sink() {
    return [this](const Record& r) { write(r); };
  }

 private:
  std::ofstream out_;
};

/// Flattened CSV with one header row.
void write_csv(const std::vector<Record>& records, const std::string& path);

}  // namespace perc

#endif  // PERC_RECORDS_HPP

#ifndef PERC_CLI_HPP
#define PERC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "perc/oracle.hpp"

namespace perc {

/// Exit codes of perclab.
enum ExitCode : int {
  kExitOk = 0,
  kExitAuditFailed = 1,
  kExitValidation = 2,
  kExitBudget = 3,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PERCLAB_OUTPUT_DIR";

/// Runs perclab with argv-style arguments (args[0] is the program name).
/// Records go to `out`, diagnostics and error JSON to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string exact_report_json(const ExactReport& report);

}  // namespace perc

#endif  // PERC_CLI_HPP

#ifndef PERC_ERROR_HPP
#define PERC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace perc {

enum class ErrorCode {
  InvalidSpec,
  VertexOutOfRange,
  InvalidProbability,
  RankOutOfRange,
  VertexNotInCluster,
  SingletonCluster,
  NoConvergence,
  TooManyEdges,
  TargetUnreachable,
  InsufficientPoints,
  WindowTooNarrow,
  InsufficientSamples,
  InvalidArgument,
  ConfigError,
  UnsupportedVersion,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::VertexNotInCluster: return "VertexNotInCluster";
    case ErrorCode::SingletonCluster: return "SingletonCluster";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooManyEdges: return "TooManyEdges";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
  }
  return "Unknown";
}

/// Library-wide exception. The code is machine readable and is what the CLI
/// reports on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

inline void check_probability(double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidProbability,
          "p must lie in [0,1], got " + std::to_string(p));
}

}  // namespace perc

#endif  // PERC_ERROR_HPP

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bearing {

enum class ErrorKind {
  CoincidentAgents,
  NotUnit,
  BadLeaderCount,
  InvalidGraph,
  NotUniquelyLocalizable,
  OrderMismatch,
  DimensionMismatch,
  CollisionDetected,
  NonFiniteState,
  ThresholdNotMet,
  BadTheta,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CoincidentAgents: return "CoincidentAgents";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::BadLeaderCount: return "BadLeaderCount";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::NotUniquelyLocalizable: return "NotUniquelyLocalizable";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CollisionDetected: return "CollisionDetected";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::ThresholdNotMet: return "ThresholdNotMet";
    case ErrorKind::BadTheta: return "BadTheta";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` is the machine-readable class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by bearing computations; carries the offending edge (or -1 for a bare pair).
class CoincidentAgentsError : public Error {
 public:
  CoincidentAgentsError(int edge, const std::string& what)
      : Error(ErrorKind::CoincidentAgents, what), edge_(edge) {}
  int edge() const noexcept { return edge_; }

 private:
  int edge_;
};

}  // namespace bearing

#pragma once

#include <stdexcept>
#include <string>

namespace finharm {

enum class ErrorKind {
  SizeCap,
  Schema,
  Associativity,
  Identity,
  Inverse,
  Nonabelian,
  GroupMismatch,
  Dimension,
  NotProbability,
  NotPositiveDefinite,
  Tolerance,
  Residual,
  Convergence,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SizeCap: return "size cap exceeded";
    case ErrorKind::Schema: return "schema violation";
    case ErrorKind::Associativity: return "associativity failure";
    case ErrorKind::Identity: return "missing identity";
    case ErrorKind::Inverse: return "missing inverse";
    case ErrorKind::Nonabelian: return "nonabelian";
    case ErrorKind::GroupMismatch: return "group mismatch";
    case ErrorKind::Dimension: return "dimension mismatch";
    case ErrorKind::NotProbability: return "not a probability measure";
    case ErrorKind::NotPositiveDefinite: return "not in P1(G)";
    case ErrorKind::Tolerance: return "tolerance misconfiguration";
    case ErrorKind::Residual: return "reconstruction residual too large";
    case ErrorKind::Convergence: return "no convergence";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` is stable for callers that
/// branch on the failure class; `what()` carries the offending detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace finharm

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace sdlab {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Domain,       // argument outside the mathematical domain
  Branch,       // complex power evaluated on the branch cut
  Chart,        // point on an excluded set of a coordinate chart
  Accuracy,     // finite-difference step too coarse for the requested tolerance
  Descriptor,   // manifold descriptor lacks required data
  Consistency,  // topological data disagree with curvature integrals
  Validation,   // catalog entry violates an invariant
  Parse,        // malformed input text
  Numeric,      // ill-conditioned input
  Resource,     // a configured cap was exceeded or refinement stalled
};

const char* to_string(ErrorKind kind) noexcept;

/// Every error names the precondition or invariant it violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string precondition, const std::string& message,
        std::optional<double> estimate = std::nullopt)
      : std::runtime_error(message),
        kind_(kind),
        precondition_(std::move(precondition)),
        estimate_(estimate) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& precondition() const noexcept { return precondition_; }
  /// Attached numeric diagnostic (Richardson estimate, offending value, ...).
  std::optional<double> estimate() const noexcept { return estimate_; }

 private:
  ErrorKind kind_;
  std::string precondition_;
  std::optional<double> estimate_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string precondition,
                              const std::string& message,
                              std::optional<double> estimate = std::nullopt) {
  throw Error(kind, std::move(precondition), message, estimate);
}

}  // namespace sdlab

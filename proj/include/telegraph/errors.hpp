#pragma once
// Exception types used across the library.  Solver failures carry enough
// state for a caller (CLI or test) to report what happened without
// re-running the computation.

#include <stdexcept>
#include <string>
#include <vector>

namespace telegraph {

// Invalid or inconsistent user-facing configuration (bad keys, bad values,
// quadrature requests past the configured cap).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Structural misuse of an operation (capacity mismatch, negative time, ...).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Picard iteration hit the iteration cap before reaching fp_tol.
class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

// A ball-membership precondition or audit failed.
class InvarianceError : public std::runtime_error {
 public:
  InvarianceError(const std::string& what, double measured, double bound)
      : std::runtime_error(what), measured_norm(measured), bound_value(bound) {}
  double measured_norm;
  double bound_value;
};

}  // namespace telegraph

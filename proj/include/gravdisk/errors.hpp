#pragma once
#include <stdexcept>
#include <string>

namespace gravdisk {

// Configuration problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical aborts: degenerate maps, solver failures, Taylor-sign violations
// (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : NumericalError {
  double residual;
  SolverError(const std::string& msg, double res)
      : NumericalError(msg), residual(res) {}
};

}  // namespace gravdisk

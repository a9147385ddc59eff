#pragma once

#include <stdexcept>
#include <string>

namespace softhex {

// Bad user input or out-of-domain argument (caller error).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical degeneracy detected at runtime (ill-conditioned mass matrix,
// failed trim solve, NaN state, ...).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrust/torque allocation map lost rank; carries the offending singular value.
struct AllocationError : NumericalError {
  AllocationError(const std::string& msg, double min_singular_value)
      : NumericalError(msg), min_singular_value(min_singular_value) {}
  double min_singular_value;
};

}  // namespace softhex

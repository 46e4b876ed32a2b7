#pragma once

#include <stdexcept>
#include <string>

namespace atphase {

// Validation failures (bad parameters, malformed input). CLI maps these to exit 2.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Lattice sizes beyond the exact-solver capacity.
struct CapacityError : ValidationError {
  explicit CapacityError(const std::string& msg) : ValidationError(msg) {}
};

// Numerical failures (quadrature budget, degenerate weights, fit breakdown). Exit 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace atphase

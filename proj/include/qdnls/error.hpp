#pragma once

#include <stdexcept>
#include <string>

namespace qdnls {

// Bad input: inadmissible parameters, mismatched grids, regime violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but produced unusable numbers (NaN, blow-up, quadrature
// that would not converge).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdnls

#pragma once

#include <stdexcept>
#include <string>

namespace hgat {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: ValidationError -> 2, NumericError -> 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape / dimension mismatches between tensors or model components.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// API misuse (e.g. backpropagating through a value that is not on the tape).
class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Non-finite values, failed root finds, undefined statistics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hgat

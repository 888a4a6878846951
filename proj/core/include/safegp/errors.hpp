#pragma once

#include <stdexcept>
#include <string>

namespace safegp {

/// Raised when arguments violate a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization fails even after the jitter schedule.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Library version string (CMake project version).
const char* version() noexcept;

}  // namespace safegp

#pragma once

#include <stdexcept>
#include <string>

namespace spheq {

/// Raised when an argument lies outside the domain of a routine.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a series, quadrature or root search fails to reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or incomplete scenario configurations.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace spheq

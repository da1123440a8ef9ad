#pragma once

#include <stdexcept>

namespace gaplab {

// Thrown on inconsistent or out-of-contract inputs. CLI maps this to exit 2.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a request exceeds a configured size limit. CLI exit 3.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on structurally malformed certificates. CLI exit 4.
struct certificate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gaplab

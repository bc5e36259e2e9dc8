#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Numeric failures: a well-posed request with no solution or no convergence.
// The CLI maps these to exit code 2, as opposed to validation errors
// (std::invalid_argument / std::out_of_range / std::domain_error -> exit 1).
struct NoSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite-difference evaluation point fell off the tuning-curve branch.
struct DerivativeUndefinedError : NoSolutionError {
  using NoSolutionError::NoSolutionError;
};

// Singular normal equations in a least-squares fit.
struct RankDeficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs outside the validity region of a first-order model.
struct ModelValidityError : std::domain_error {
  using std::domain_error::domain_error;
};

// Integration step too large for the fastest time constant.
struct StabilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace biphoton

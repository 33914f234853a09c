#pragma once

#include <stdexcept>
#include <string>

namespace jamsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid scenario or system parameters (violated invariants, bad sizes).
struct ConfigError : Error {
  using Error::Error;
};

/// Scenario-file syntax or semantic problem; message carries file:line.
struct ParseError : Error {
  using Error::Error;
};

/// Parameters outside a formula's domain of definition.
struct DomainError : Error {
  using Error::Error;
};

/// The stacked estimate matrix was numerically rank deficient.
struct SingularCombinerError : Error {
  SingularCombinerError(const std::string& what, double rcond_estimate)
      : Error(what), rcond(rcond_estimate) {}
  double rcond;
};

}  // namespace jamsim

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spikeloop {

/// Invalid scenario, parameter or file-format configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A documented operation precondition was violated by the caller.
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

/// NaN/Inf encountered during integration; carries the offending state.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, std::vector<double> state_values = {})
      : std::runtime_error(what), state(std::move(state_values)) {}

  std::vector<double> state;
};

/// A stability-design constraint failed; `inequality` names which one.
struct DesignError : std::invalid_argument {
  DesignError(const std::string& what, std::string violated)
      : std::invalid_argument(what), inequality(std::move(violated)) {}

  std::string inequality;
};

/// The closed loop can never spike again (zero plant state).
struct NoSpikeError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Filesystem write failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spikeloop

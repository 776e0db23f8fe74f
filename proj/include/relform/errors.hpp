#pragma once

#include <stdexcept>
#include <string>

namespace relform {

// Error families shared by all modules. Callers distinguish them by type;
// the CLI maps ConfigError to a usage status.

struct MalformedInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedOrderError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A denominator did not split into linear factors with rational roots.
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::length_error {
  using std::length_error::length_error;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

struct MissingDataError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace relform

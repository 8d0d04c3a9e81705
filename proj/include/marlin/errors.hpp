#pragma once

#include <stdexcept>
#include <string>

namespace marlin {

/// Base class for all numerical failures (CLI maps these to exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration / input-contract failures (CLI maps these to exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Euler-angle rate map undefined (|cos(theta)| below tolerance).
struct SingularityError : NumericError {
  using NumericError::NumericError;
};

/// Assembled mass matrix not invertible to working precision.
struct NonInvertibleMassError : NumericError {
  using NumericError::NumericError;
};

/// Covariance lost positive definiteness beyond repair.
struct CovarianceNotPdError : NumericError {
  using NumericError::NumericError;
};

struct DimensionMismatchError : ConfigError {
  using ConfigError::ConfigError;
};

struct MismatchedBankSizesError : ConfigError {
  using ConfigError::ConfigError;
};

struct LengthMismatchError : ConfigError {
  using ConfigError::ConfigError;
};

struct EmptyInputError : ConfigError {
  using ConfigError::ConfigError;
};

struct InsufficientDataError : ConfigError {
  using ConfigError::ConfigError;
};

struct ZeroEnergyError : NumericError {
  using NumericError::NumericError;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace marlin

#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid lattice/potential/run configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of the on-site potential (saturable: s <= -1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Amplitude violates the non-degeneracy conditions required by an operation.
class DegenerateAmplitudeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical failure: Newton non-convergence, eigensolver failure,
/// midpoint solve failure (CLI exit code 3).
class NumericalError : public Error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Onset rejected because its kernel is not simple (1:1 or 1:l resonance).
class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dnls

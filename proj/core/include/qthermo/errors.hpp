#pragma once

#include <stdexcept>
#include <string>

namespace qthermo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonPositiveArgument : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue gap falls inside the clustering guard band; the degeneracy
/// tolerance is ill-suited for the spectrum at hand.
class AmbiguousClustering : public Error {
 public:
  using Error::Error;
};

/// Multiplicity pattern changed between adjacent time steps.
class DegeneracyChanged : public Error {
 public:
  using Error::Error;
};

class StateInvariantViolated : public Error {
 public:
  using Error::Error;
};

class NonUnitaryProcess : public Error {
 public:
  using Error::Error;
};

/// The two coherent-heat evaluations disagree beyond tolerance.
class FormulaMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace qthermo

#pragma once

#include <stdexcept>
#include <string>

namespace vrlab {

/// Base of every error raised by the library. Callers that only need to
/// report a failure can catch this; the subclasses exist so that drivers can
/// react differently (e.g. retry a rotor run with a larger truncation).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real/hermitian/normalized drifted past tolerance.
class NumericalIntegrity : public Error {
 public:
  using Error::Error;
};

/// Energy drift exceeded its bound; the usual cure is a smaller time step.
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

/// Population reached the edge of a truncated basis.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class EigenSolverFailure : public Error {
 public:
  using Error::Error;
};

class DiagnosticsError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DivergentPeriod : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vrlab

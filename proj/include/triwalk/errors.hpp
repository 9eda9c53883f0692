#pragma once

#include <stdexcept>
#include <string>

namespace triwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coin parameter outside the open family range (rho in (0,1), phi in [0, pi/2)).
class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

class BasisMismatch : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class StepBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ZeroSteps : public Error {
 public:
  using Error::Error;
};

/// Velocity query on or outside the closed support of a limit density.
class OutsideSupport : public Error {
 public:
  using Error::Error;
};

/// A square-root argument is negative beyond floating-point noise.
class NegativeRadicand : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class OracleRegimeExceeded : public Error {
 public:
  using Error::Error;
};

/// Both time-dependent Bloch eigenvectors collapse (coalescing eigenvalues).
class DegenerateNormalization : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace triwalk

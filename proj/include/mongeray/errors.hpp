#pragma once

#include <stdexcept>
#include <string>

namespace mongeray {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The point sits on the base segment x2 = 0, where no ray is defined.
class DegenerateRayError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Integrand returned a non-finite value.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class ToleranceNotMetError : public IntegrationError {
 public:
  ToleranceNotMetError(const std::string& what, double estimate, double error)
      : IntegrationError(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// f(lo) and f(hi) have the same strict sign.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Density construction failed validation (non-finite eta, c too large, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Operation not allowed in the object's current state.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A relation that holds by construction was found violated.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A log-log fit saw a non-positive sample.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace mongeray

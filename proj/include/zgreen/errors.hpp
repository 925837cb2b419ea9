#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace zgreen {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

/// A matrix that must be invertible is numerically singular.
struct InversionFailure : Error {
  using Error::Error;
};

struct RangeTooShort : Error {
  using Error::Error;
};

struct RangeMismatch : Error {
  using Error::Error;
};

struct NotIdempotent : Error {
  using Error::Error;
};

struct WrongAxis : Error {
  using Error::Error;
};

/// A tail matrix has an eigenvalue too close to the unit circle, so the
/// homogeneous equation is not exponentially dichotomous on that semi-axis.
struct UnitCircleEigenvalue : Error {
  std::complex<double> eigenvalue;
  explicit UnitCircleEigenvalue(std::complex<double> mu);
};

/// The truncated boundary-value problem has no solution within tolerance.
struct InfeasibleTruncation : Error {
  double residual;
  explicit InfeasibleTruncation(double res);
};

struct ParseError : Error {
  using Error::Error;
};

struct VerificationFailure : Error {
  std::string check;
  explicit VerificationFailure(std::string which, const std::string& detail);
};

struct UnknownDemo : Error {
  using Error::Error;
};

}  // namespace zgreen

#pragma once

#include <stdexcept>
#include <string>

namespace caputo {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size, count, tolerance or range argument is out of bounds.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The derivative order is not a positive non-integer.
class InvalidOrder : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// A time step is not strictly positive.
class InvalidStep : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// A caller-supplied function returned a non-finite value, or the scheme
/// produced one.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// The requested operation needs data the problem does not carry.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// Too few usable points for a rate fit.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// An adaptive reference integral failed to reach its tolerance.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace caputo

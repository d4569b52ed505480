#pragma once

#include <stdexcept>
#include <string>

namespace fracrte {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Series, contour or iterative scheme failed to reach tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidPhaseFunction : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double k) : Error(what), k_(k) {}
  double k() const noexcept { return k_; }

 private:
  double k_;
};

// Eigenvalues coalesce; the eigenvector basis cannot represent E_a(-A t^a).
class DefectiveOperatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolventError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// CTRW time scale too coarse for the requested medium.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class LogicError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracrte

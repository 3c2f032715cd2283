#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace difftrio {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidProblemError : public Error {
public:
  using Error::Error;
};

/// A precondition on how two objects are paired was violated.
class ContractError : public Error {
public:
  using Error::Error;
};

class OutOfRangeError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConfigurationError : public Error {
public:
  using Error::Error;
};

/// Explicit step larger than the CFL bound.
class StabilityError : public Error {
public:
  using Error::Error;
};

/// A constitutive coefficient left its admissible (positive) range.
class ConstitutiveRangeError : public Error {
public:
  ConstitutiveRangeError(const std::string& what, double location)
      : Error(what), location_(location) {}
  double location() const noexcept { return location_; }

private:
  double location_;
};

/// Time integration failed at time `t()`.
class IntegrationError : public Error {
public:
  IntegrationError(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const noexcept { return t_; }

private:
  double t_;
};

/// Step size fell below the underflow floor.
class StiffnessError : public IntegrationError {
public:
  using IntegrationError::IntegrationError;
};

/// Newton iteration of an implicit stage did not converge.
class StiffSolveError : public IntegrationError {
public:
  using IntegrationError::IntegrationError;
};

class UndefinedScdError : public Error {
public:
  using Error::Error;
};

class LocationError : public Error {
public:
  using Error::Error;
};

class OracleDivergenceError : public Error {
public:
  OracleDivergenceError(const std::string& what, double cross_error)
      : Error(what), cross_error_(cross_error) {}
  double cross_error() const noexcept { return cross_error_; }

private:
  double cross_error_;
};

/// Malformed boundary-condition file; `row()` is the 1-based line number.
class IngestionError : public Error {
public:
  IngestionError(const std::string& what, std::size_t row)
      : Error(what + " (line " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

}  // namespace difftrio

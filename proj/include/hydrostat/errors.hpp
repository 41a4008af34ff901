#pragma once

#include <stdexcept>
#include <string>

namespace hydrostat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, shape mismatch between operands, bad run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Operator applied to a field with the wrong number of components.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A physical parameter outside its admissible range (e.g. mollifier radius).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Driver fields offered at times that do not match the Runge-Kutta stages.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

/// The barotropic constraint (or a periodicity requirement that depends on
/// it) is violated by more than the admissible tolerance.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace hydrostat

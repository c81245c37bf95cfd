#pragma once

#include <stdexcept>
#include <string>

namespace twistorlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies outside the sampling region of a chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric is not positive definite (or not invertible) at a point.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// A derivative was requested beyond the available truncation order.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Tensor valence or form degree does not fit the operation.
class ValenceError : public Error {
 public:
  using Error::Error;
};

/// Preconditions of an identity do not hold; distinct from the identity failing.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A metric family was rejected because its profile violates a smoothness condition.
class BoundaryConditionError : public Error {
 public:
  using Error::Error;
};

/// Bad family parameters (non-positive radius, warping that vanishes, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Run configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {})
      : Error(format(message, line, field)), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& message, int line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  int line_;
  std::string field_;
};

}  // namespace twistorlab

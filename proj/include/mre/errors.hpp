#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mre {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary or text input. Carries the byte offset of the problem.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Failure while building a spatial operator (singular intermediate matrix).
class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear or linear solve inside a time step failed.
class StepError : public Error {
 public:
  StepError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Integration blew up.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : Error(what + " (error estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Error metric could not be evaluated.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace mre

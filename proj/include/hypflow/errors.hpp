#pragma once

#include <stdexcept>
#include <string>

namespace hypflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, preset, flow or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A function evaluated outside its domain (pole of co_lambda, nonpositive volume, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The discretized flow broke down: blow-up, loss of positivity, step underflow.
/// Carries the simulation time at which the failure was detected.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Malformed or invariant-violating snapshot / config document.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypflow

#pragma once

#include <stdexcept>
#include <string>

namespace spinsim {

// Invalid physical or numerical parameters supplied by the caller.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problems with run configuration files or presets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The integrator produced NaN/Inf or runaway density.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& msg, long step, double t, double max_abs)
      : std::runtime_error(msg), step(step), t(t), max_abs(max_abs) {}
  long step;
  double t;
  double max_abs;
};

// An observable-series comparison could not be carried out.
class CompareError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinsim

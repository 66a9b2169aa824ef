#pragma once

#include <stdexcept>
#include <string>

namespace smoothsafe {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Barrier gradient undefined (state on the obstacle center).
class DegenerateGradient : public Error {
public:
  using Error::Error;
};

// L_g h below tolerance: the input does not appear in the barrier derivative.
class RelativeDegreeViolation : public Error {
public:
  using Error::Error;
};

class SolveFailure : public Error {
public:
  using Error::Error;
};

// Requested derivatives of a filter that is only Lipschitz.
class NotDifferentiable : public Error {
public:
  using Error::Error;
};

// a_d + g e_y vanishes, so thrust direction is undefined.
class DegenerateThrust : public Error {
public:
  using Error::Error;
};

class NonFiniteState : public Error {
public:
  using Error::Error;
};

// Configuration validation failure. `key` names the offending setting.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

// A runtime error raised inside a simulation, stamped with its time.
class SimulationError : public Error {
public:
  SimulationError(double t, const std::string& cause)
      : Error("t=" + std::to_string(t) + ": " + cause), time_(t) {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

}  // namespace smoothsafe

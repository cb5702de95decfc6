#pragma once

#include <stdexcept>
#include <string>

namespace scatlab {

// A time integration produced non-finite values (blow-up or instability).
class DivergedError : public std::runtime_error {
public:
  DivergedError(double last_finite_time, const std::string& msg)
      : std::runtime_error(msg), last_finite_time_(last_finite_time) {}
  double last_finite_time() const { return last_finite_time_; }

private:
  double last_finite_time_;
};

// Wrap-around contamination exceeded the configured boundary-mass bound.
class TaintedResultError : public std::runtime_error {
public:
  TaintedResultError(double boundary_mass_max, double at_time,
                     const std::string& msg)
      : std::runtime_error(msg),
        boundary_mass_max_(boundary_mass_max),
        at_time_(at_time) {}
  double boundary_mass_max() const { return boundary_mass_max_; }
  double at_time() const { return at_time_; }

private:
  double boundary_mass_max_;
  double at_time_;
};

// A single time-step interval already violates the contraction bound.
class PartitionInfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A fitted quantity sits below the solver noise floor.
class InconclusiveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration failed schema validation.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace scatlab

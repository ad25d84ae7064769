#pragma once

#include <stdexcept>

namespace fogcap {

/// Invalid or inconsistent input values (bad rates, fractions, bounds).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The queueing system has no steady state at the given load (rho too close
/// to or above 1).
class InstabilityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A simulation run finished without enough post-warmup completions.
class InsufficientHorizonError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace fogcap

#pragma once

#include <stdexcept>
#include <string>

namespace m1sim {

// Precondition violations: bad sizes, invalid parameters, undefined inputs.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine stopped short of its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_bound(achieved) {}
  double achieved_bound;
};

// An internal invariant failed; indicates a bug, not a user error.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace m1sim

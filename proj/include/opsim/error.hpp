#pragma once

#include <stdexcept>
#include <string>

namespace opsim {

/// Raised when an operation's preconditions are violated or a numerical
/// contract cannot be met.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (bad JSON, wrong dimensions). The CLI maps this to
/// exit code 1; `pointer` is a JSON pointer into the offending document.
class InputError : public Error {
 public:
  InputError(const std::string& pointer, const std::string& what)
      : Error(pointer.empty() ? what : pointer + ": " + what), pointer_(pointer) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// An iterative solver ran out of budget. `best` is the best objective value
/// reached, which is still a valid upper bound for a minimization.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best) : Error(what), best_(best) {}

  double best() const noexcept { return best_; }

 private:
  double best_;
};

}  // namespace opsim

#pragma once

#include <stdexcept>
#include <string>

namespace okl {

/// Argument outside the mathematical domain of an operation (negative
/// density argument, non-finite input, p < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller misuse: mismatched bindings, empty families, malformed files.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative construction failed to converge within its cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsing failure carrying the 1-based line number.
class ParseError : public UsageError {
 public:
  ParseError(int line, const std::string& what)
      : UsageError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace okl

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pgcl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Division by zero, token/number mismatch, value outside a declared domain.
class EvalError : public Error {
 public:
  using Error::Error;
};

// A probability evaluated outside [0,1], or a distribution not summing to 1.
class ProbabilityError : public EvalError {
 public:
  using EvalError::EvalError;
};

// Successive loop iterates decreased somewhere, or the bound by max(post) broke.
class ChainError : public Error {
 public:
  using Error::Error;
};

class ResolutionBoundError : public Error {
 public:
  using Error::Error;
};

// Variant evaluated negative or non-integral.
class VariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace pgcl

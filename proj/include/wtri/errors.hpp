#pragma once

#include <stdexcept>
#include <string>

namespace wtri {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid field parameters or arithmetic (non-prime p, reducible modulus, inverse of zero).
struct FieldError : Error {
  using Error::Error;
};

/// Mismatched sizes or fields.
struct ShapeError : Error {
  using Error::Error;
};

/// Malformed text input. `line` and `column` are 1-based, 0 when unknown.
struct ParseError : Error {
  explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

/// A sweep would exceed its element budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

/// Caller-side precondition failure (bad arguments, hypotheses not met).
struct PreconditionError : Error {
  using Error::Error;
};

/// An assertion guaranteed by the theory failed. Carries a serialized trace.
struct TheoremViolation : Error {
  TheoremViolation(const std::string& what, std::string trace) : Error(what), trace(std::move(trace)) {}
  std::string trace;
};

}  // namespace wtri

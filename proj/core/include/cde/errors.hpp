#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cde {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed expressions, violated preconditions, invalid configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Syntax error while parsing an expression; carries the byte offset.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : ValidationError("parse error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation hit a singularity (division by zero, log of zero, pole).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: non-contraction, step collapse, ball exit,
/// root-finder non-convergence, missing sign change, resonance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cde

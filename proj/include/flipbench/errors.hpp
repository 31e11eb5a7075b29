#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flipbench {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Enumeration or expansion would exceed a configured size cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A step-bounded interpreter ran out of fuel.
class FuelExhausted : public Error {
 public:
  using Error::Error;
};

// A machine reached a non-halting configuration with no applicable transition.
class StuckMachine : public Error {
 public:
  using Error::Error;
};

// A finite-stream machine asked for more random bits than it was given.
class RandomnessExhausted : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace flipbench

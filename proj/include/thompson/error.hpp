#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thompson {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// The revealing-pair construction did not terminate within its cap.  The
// construction provably terminates, so this indicates a defect.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class MalformedRevealing : public Error {
 public:
  using Error::Error;
};

// A search hypothesis does not hold for the given input.
class HypothesisFailed : public Error {
 public:
  using Error::Error;
};

// A bounded search ran out of budget without a result.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace thompson

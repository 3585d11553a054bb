#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrsc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed program text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A program that parses but violates a well-formedness rule
/// (overlapping clauses, unbound variables, arity mismatches, ...).
class ProgramError : public Error {
 public:
  using Error::Error;
};

/// Driving reached a call that the program cannot reduce, e.g. a pattern
/// match on a constructor without a clause.
class DrivingError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (depth, step budget) was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrsc

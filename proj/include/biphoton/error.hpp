#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biphoton {

// Bad caller input: parameters, grid shapes, scan ranges. Maps to CLI exit 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A spectrum whose samples vanish (or are not finite) and cannot be normalized.
// Maps to CLI exit 3.
class DegenerateSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Any other numerical breakdown. Maps to CLI exit 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed spectrum file. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace biphoton

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bootperc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

// A rule that is empty or contains the origin.
class InvalidRule : public Error {
 public:
  using Error::Error;
};

// Operation called on an object in the wrong state (e.g. a difficulty query on
// a non-critical family, or a half-plane closure along an unstable direction).
class StateError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "validation failed";
    for (const auto& issue : issues) out += "; " + issue;
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace bootperc

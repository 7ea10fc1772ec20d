#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tudof {

// Malformed network or scheme text; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid network (duplicate ids, dangling edges, bad layering, zero gains).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guarantee that should hold by construction failed.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An exhaustive routine refused an input above its size guard.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tudof

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmfft {

// Transform length (or grid side) is not acceptable, e.g. not a power of two.
class LengthError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Non-finite samples or out-of-range numeric arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Backing-file failures (open, short read/write, wrong size).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A semantic constraint on a value was violated. `where` names the offending
// item: a config path such as "machines[1].freq_ghz", a tree edge such as
// "PM_CMPLU_STALL_LSU <= PM_CMPLU_STALL", or a kernel label.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string where, const std::string& what)
      : std::invalid_argument(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// Text input could not be parsed. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nmfft

#pragma once

#include <stdexcept>
#include <string>

namespace spspec {

/// Bad arguments or inconsistent inputs (basis mismatch, arity, ranges).
class ValidationError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact counts that no longer fit the 128-bit accumulator.
class CountOverflow : public std::overflow_error
{
 public:
  using std::overflow_error::overflow_error;
};

class QuadratureError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized data. Carries the 1-based line number when known.
class FormatError : public std::runtime_error
{
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what)
      , line_(line)
  {
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace spspec

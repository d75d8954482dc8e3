#pragma once

#include <stdexcept>
#include <string>

namespace exo {

/// Input outside the mathematical domain of a model (e.g. bend angle >= pi).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A design point violates a packing or indicator constraint.
class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(std::string constraint, const std::string& what)
      : std::runtime_error(what), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// Malformed configuration of a grid or search (empty ranges, bad steps).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input whose values fail validation (negative pressure, jitter).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: unknown export format, mismatched sample rate, bad flags.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace exo

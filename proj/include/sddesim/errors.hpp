#pragma once

#include <stdexcept>
#include <string>

namespace sdde {

// Caller passed arguments that violate an operation's precondition
// (dimension mismatch, out-of-range index, non-in-Xi functional, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A run configuration is invalid (bad step size, malformed config file,
// inconsistent grid). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The step-size gates failed and no override was requested.
// Maps to CLI exit code 3.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical computation produced a non-finite value or an iteration
// failed to converge. Maps to CLI exit code 4.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV, manifest). Carries a line number when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
  ParseError(const std::string& file, long line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

}  // namespace sdde

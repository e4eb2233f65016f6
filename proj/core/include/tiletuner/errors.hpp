#pragma once

#include <stdexcept>
#include <string>

namespace tiletuner {

// Error conventions across the library:
//   std::invalid_argument - malformed values, configurations outside a space
//   std::out_of_range     - lookups of unregistered kernels, sizes, or names
// plus the domain-specific failures below.

// A factorization hit a numerically impossible state: a vanishing LU pivot
// or a non-positive diagonal in Cholesky (non-SPD input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by a tuner once every configuration of its space has been evaluated.
class SpaceExhausted : public std::runtime_error {
 public:
  SpaceExhausted() : std::runtime_error("search space exhausted") {}
};

// A trace file could not be parsed; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Timer misbehavior or a failed in-run correctness spot check.
class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tiletuner

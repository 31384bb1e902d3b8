#pragma once

#include <stdexcept>
#include <string>

namespace popabm {

// Bad or incomplete input: malformed files, coverage gaps, invalid arguments.
// The CLI maps it to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter table does not cover a (year, region, sex, age) cell that a run
// can reach.
class CoverageError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical procedure failed (e.g. IPF did not converge). Exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace popabm

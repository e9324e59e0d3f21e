// Exception types shared by all whfactor modules.
#pragma once

#include <stdexcept>
#include <string>

namespace whf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of a matrix operation have different dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// |det F(x)| fell below the configured floor.
class NearSingular : public Error {
 public:
  NearSingular(double x, double abs_det)
      : Error("matrix is near singular at x = " + std::to_string(x) +
              " (|det| = " + std::to_string(abs_det) + ")"),
        x_(x),
        abs_det_(abs_det) {}
  double x() const noexcept { return x_; }
  double abs_det() const noexcept { return abs_det_; }

 private:
  double x_;
  double abs_det_;
};

/// A tail extrapolation did not settle.
class NoLimit : public Error {
 public:
  using Error::Error;
};

/// Panel refinement changed an integral by more than the tolerance allows.
class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

/// Off-axis evaluation requested closer to the real line than min_imag_distance.
class TooCloseToAxis : public Error {
 public:
  using Error::Error;
};

class ArgumentJump : public Error {
 public:
  using Error::Error;
};

class NearZero : public Error {
 public:
  using Error::Error;
};

class InvalidIndices : public Error {
 public:
  using Error::Error;
};

class NotSolvable : public Error {
 public:
  using Error::Error;
};

class PolicyConflict : public Error {
 public:
  using Error::Error;
};

class OrderExceeded : public Error {
 public:
  using Error::Error;
};

class NoUnstablePair : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (expressions, spec files, CLI configuration).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace whf

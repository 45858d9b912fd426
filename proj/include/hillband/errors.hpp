#pragma once

#include <stdexcept>
#include <string>

namespace hillband {

enum class ErrorKind {
  InvalidGrid,
  Bracket,
  ExtremumNotBracketed,
  InvalidParameter,
  Singularity,
  NonConvergence,
  DegeneratePair,
  SeedNotNodeless,
  Truncation,
  DegenerateEdge,
  DegenerateTransform,
  Range,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base for every failure raised by the library. `kind()` lets callers map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an evaluation point falls inside the exclusion radius of a
/// pole of tan(k0 x).
class SingularityError : public Error {
 public:
  SingularityError(double x, double pole);
  double x() const noexcept { return x_; }
  double pole() const noexcept { return pole_; }

 private:
  double x_;
  double pole_;
};

/// Raised when the spectral-parameter series cannot be trusted at the
/// requested K^2 for the basis depth.
class TruncationError : public Error {
 public:
  TruncationError(double K2, double tail, int depth, int suggested_depth);
  double K2() const noexcept { return K2_; }
  double tail() const noexcept { return tail_; }
  int depth() const noexcept { return depth_; }
  int suggested_depth() const noexcept { return suggested_depth_; }

 private:
  double K2_;
  double tail_;
  int depth_;
  int suggested_depth_;
};

}  // namespace hillband

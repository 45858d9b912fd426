#include "hillband/errors.hpp"

#include <fmt/format.h>

namespace hillband {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::ExtremumNotBracketed: return "extremum-not-bracketed";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::DegeneratePair: return "degenerate-pair";
    case ErrorKind::SeedNotNodeless: return "seed-not-nodeless";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::DegenerateEdge: return "degenerate-edge";
    case ErrorKind::DegenerateTransform: return "degenerate-transform";
    case ErrorKind::Range: return "range";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

SingularityError::SingularityError(double x, double pole)
    : Error(ErrorKind::Singularity,
            fmt::format("x = {:.17g} lies within the exclusion radius of the pole at {:.17g}",
                        x, pole)),
      x_(x),
      pole_(pole) {}

TruncationError::TruncationError(double K2, double tail, int depth, int suggested_depth)
    : Error(ErrorKind::Truncation,
            fmt::format("series tail {:.3e} at K2 = {:.17g} exceeds tolerance for depth {}; "
                        "try --spps-terms {}",
                        tail, K2, depth, suggested_depth)),
      K2_(K2),
      tail_(tail),
      depth_(depth),
      suggested_depth_(suggested_depth) {}

}  // namespace hillband

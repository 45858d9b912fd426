#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include "hillband/spps.hpp"

namespace hillband::testing {

/// Bases are deterministic and immutable, so tests share one per setting.
inline const SppsBasis& shared_basis(double s, int n_intervals = 8000, int depth = 40,
                                     double k0 = 1.0) {
  static std::map<std::tuple<double, double, int, int>, std::unique_ptr<SppsBasis>> cache;
  auto& slot = cache[{k0, s, n_intervals, depth}];
  if (!slot) slot = std::make_unique<SppsBasis>(build_basis(ModelParams(k0, s), n_intervals, depth));
  return *slot;
}

/// Closed-form discriminant 2 cos(Lambda sqrt((k0+s)^2 + K^2)), cosh below K0^2.
inline Complex closed_form_D(const ModelParams& p, double K2) {
  const Complex root = std::sqrt(Complex{K2 - p.K0sq(), 0.0});
  return 2.0 * std::cos(p.Lambda() * root);
}

}  // namespace hillband::testing

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hillband/model.hpp"
#include "hillband/numerics.hpp"

namespace hillband {

/// Largest tail estimate accepted before a K^2 is refused for a basis depth.
inline constexpr double kTailTolerance = 1e-10;

/// Per-order magnitude bounds of the series terms and the tail estimate
/// derived from them. Small enough to copy into anything that sums the
/// series later.
class TruncationBound {
 public:
  TruncationBound() = default;
  TruncationBound(double center, double Lambda, std::vector<double> even_max,
                  std::vector<double> odd_max);

  int depth() const noexcept { return static_cast<int>(even_max_.size()) - 1; }
  double center() const noexcept { return center_; }
  double even_level_max(int n) const { return even_max_.at(n); }
  double odd_level_max(int n) const { return odd_max_.at(n); }

  /// Magnitude of the order-n contribution at K^2.
  double term(int n, double K2) const;
  /// Last retained term times rho/(1-rho), rho the ratio of the last two
  /// terms. Infinite when the terms are not decaying.
  double tail(double K2) const;
  /// Smallest depth whose (|delta| Lambda^2)^k/(2k)! envelope is negligible
  /// at K^2, never less than depth() + 10.
  int suggested_depth(double K2) const;
  /// Throws TruncationError when tail(K2) exceeds kTailTolerance.
  void require(double K2) const;

 private:
  double center_ = 0.0;
  double Lambda_ = 0.0;
  std::vector<double> even_max_;
  std::vector<double> odd_max_;
};

struct SeedValue {
  Complex value;
  Complex derivative;
};

/// Nodeless solution of the f-equation at K0^2 and its x-derivative.
using SeedFunction = std::function<SeedValue(double x)>;

/// Recursive-integral tables of the spectral parameter power series,
/// computed once per (model, grid, depth) and immutable afterwards.
///
/// Level n of the X~ tables integrates X~^(n-1) against f0^2 for odd n and
/// against -1/f0^2 for even n; the X tables swap the two weights. Both start
/// from the constant 1, and every level above zero vanishes at x = 0.
class SppsBasis {
 public:
  SppsBasis(const ModelParams& params, const Grid& grid, SeedFunction seed, int depth);

  const ModelParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return grid_; }
  int depth() const noexcept { return depth_; }

  std::span<const Complex> f0() const noexcept { return f0_; }
  /// Seed derivative per node; NaN at a node inside the pole exclusion.
  std::span<const Complex> f0_prime() const noexcept { return f0_prime_; }
  Complex f0_at_0() const noexcept { return f0_.front(); }
  Complex f0_prime_at_0() const noexcept { return f0_prime_.front(); }
  const SeedFunction& seed() const noexcept { return seed_; }

  /// X~^(level) over the grid, level = 0 .. 2*depth.
  std::span<const Complex> xt(int level) const { return xt_.at(level); }
  /// X^(level) over the grid, level = 0 .. 2*depth.
  std::span<const Complex> x(int level) const { return x_.at(level); }

  /// Term bounds: max over nodes of |X~^(2n)| + |X^(2n)| and of
  /// |X~^(2n-1)| + |X^(2n-1)|.
  const TruncationBound& bound() const noexcept { return bound_; }

 private:
  ModelParams params_;
  Grid grid_;
  SeedFunction seed_;
  int depth_;
  Samples f0_;
  Samples f0_prime_;
  std::vector<Samples> xt_;
  std::vector<Samples> x_;
  TruncationBound bound_;
};

/// Builds the basis from the closed-form nodeless seed. Requires an even
/// n_intervals >= 64 and depth >= 1; throws SeedNotNodeless when |f0| drops
/// below 1e-8 on the grid.
SppsBasis build_basis(const ModelParams& params, int n_intervals, int depth);

struct CellSolution {
  double K2;
  Complex f1;
  Complex f2;
  Complex f1_prime;
  Complex f2_prime;
};

/// Estimated magnitude of the neglected series tail at K^2.
double truncation_tail(const SppsBasis& basis, double K2);

/// Normalized cell solutions (f1, f2) = (1, 0), (f1', f2') = (0, 1) at x = 0.
/// Derivatives come from the series identities, not from differencing.
/// Throws TruncationError when the tail exceeds kTailTolerance.
CellSolution eval_cell_solutions_at_node(const SppsBasis& basis, double K2, std::size_t node);

/// Same at any x in [0, Lambda]; off-node points interpolate the series sums
/// with four-point Lagrange stencils (O(h^4)) and use the seed in closed form.
CellSolution eval_cell_solutions(const SppsBasis& basis, double K2, double x);

/// Every grid node at once.
std::vector<CellSolution> eval_cell_solutions(const SppsBasis& basis, double K2);

}  // namespace hillband

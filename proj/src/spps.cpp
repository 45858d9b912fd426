#include "hillband/spps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hillband/errors.hpp"
#include "hillband/hyp_oracle.hpp"

namespace hillband {

namespace {

constexpr double kNodelessFloor = 1e-8;

double max_abs_sum(const Samples& u, const Samples& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i]) + std::abs(v[i]));
  return m;
}

}  // namespace

SppsBasis::SppsBasis(const ModelParams& params, const Grid& grid, SeedFunction seed, int depth)
    : params_(params), grid_(grid), seed_(std::move(seed)), depth_(depth) {
  if (depth < 1) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("series depth must be >= 1, got {}", depth));
  }
  if (std::abs(grid.length() - params.Lambda()) > 1e-12 * params.Lambda()) {
    throw Error(ErrorKind::InvalidGrid, "basis grid must span exactly one period [0, Lambda]");
  }
  const std::size_t n = grid_.size();
  const SingularSet poles = SingularSet::of(params_);
  f0_.resize(n);
  f0_prime_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const SeedValue v = seed_(grid_[j]);
    f0_[j] = v.value;
    f0_prime_[j] = poles.excludes(grid_[j])
                       ? Complex{std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN()}
                       : v.derivative;
  }
  // The seed is Lambda-periodic; pin the endpoint to the start exactly.
  f0_.back() = f0_.front();
  f0_prime_.back() = f0_prime_.front();

  double min_abs = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(f0_[j]) < min_abs) {
      min_abs = std::abs(f0_[j]);
      argmin = j;
    }
  }
  if (!(min_abs > kNodelessFloor)) {
    throw Error(ErrorKind::SeedNotNodeless,
                fmt::format("seed |f0| = {:.3e} at x = {:.17g} is below the nodeless floor {:.0e}",
                            min_abs, grid_[argmin], kNodelessFloor));
  }

  Samples weight_sq(n);
  Samples weight_inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    weight_sq[j] = f0_[j] * f0_[j];
    weight_inv[j] = -1.0 / weight_sq[j];
  }

  const int levels = 2 * depth_;
  xt_.assign(levels + 1, Samples(n, Complex{1.0}));
  x_.assign(levels + 1, Samples(n, Complex{1.0}));
  Samples integrand(n);
  for (int level = 1; level <= levels; ++level) {
    const bool odd = level % 2 == 1;
    const Samples& w_t = odd ? weight_sq : weight_inv;
    const Samples& w_x = odd ? weight_inv : weight_sq;
    for (std::size_t j = 0; j < n; ++j) integrand[j] = xt_[level - 1][j] * w_t[j];
    xt_[level] = cumulative_integral(grid_, integrand);
    for (std::size_t j = 0; j < n; ++j) integrand[j] = x_[level - 1][j] * w_x[j];
    x_[level] = cumulative_integral(grid_, integrand);
  }

  std::vector<double> even_max(depth_ + 1);
  std::vector<double> odd_max(depth_ + 1, 0.0);
  for (int k = 0; k <= depth_; ++k) {
    even_max[k] = max_abs_sum(xt_[2 * k], x_[2 * k]);
    if (k >= 1) odd_max[k] = max_abs_sum(xt_[2 * k - 1], x_[2 * k - 1]);
  }
  bound_ = TruncationBound(params_.K0sq(), params_.Lambda(), std::move(even_max),
                           std::move(odd_max));
}

SppsBasis build_basis(const ModelParams& params, int n_intervals, int depth) {
  if (n_intervals < 64 || n_intervals % 2 != 0) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("SPPS grid needs an even interval count >= 64, got {}", n_intervals));
  }
  SeedFunction seed = [params](double x) {
    return SeedValue{f0_bandedge(x, params), f0_bandedge_derivative(x, params)};
  };
  return SppsBasis(params, Grid(params.Lambda(), n_intervals), std::move(seed), depth);
}

TruncationBound::TruncationBound(double center, double Lambda, std::vector<double> even_max,
                                 std::vector<double> odd_max)
    : center_(center), Lambda_(Lambda), even_max_(std::move(even_max)),
      odd_max_(std::move(odd_max)) {}

double TruncationBound::term(int n, double K2) const {
  const double ad = std::abs(K2 - center_);
  double t = even_max_.at(n) * std::pow(ad, n);
  if (n >= 1) t += odd_max_.at(n) * std::pow(ad, n - 1);
  return t;
}

double TruncationBound::tail(double K2) const {
  const int M = depth();
  const double last = term(M, K2);
  if (last == 0.0) return 0.0;
  const double prev = term(M - 1, K2);
  if (prev == 0.0) return std::numeric_limits<double>::infinity();
  const double rho = last / prev;
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return last * rho / (1.0 - rho);
}

int TruncationBound::suggested_depth(double K2) const {
  // Terms decay like u^k/(2k)!; fit u to the last observed ratio and
  // extrapolate until the geometric tail falls well below tolerance.
  const int M = depth();
  const double last = term(M, K2);
  const double prev = term(M - 1, K2);
  const double fallback = std::abs(K2 - center_) * Lambda_ * Lambda_;
  const double u = (last > 0.0 && prev > 0.0)
                       ? std::max(last / prev * (2.0 * M - 1.0) * (2.0 * M), fallback)
                       : fallback;
  double log_t = last > 0.0 ? std::log(last) : std::log(fallback);
  const double target = std::log(kTailTolerance * 1e-2);
  int k = M;
  while (k < 100000) {
    ++k;
    const double log_ratio = std::log(u) - std::log((2.0 * k - 1.0) * (2.0 * k));
    log_t += log_ratio;
    if (log_ratio < std::log(0.5) && log_t < target) break;
  }
  return std::max(k, M + 10);
}

void TruncationBound::require(double K2) const {
  const double t = tail(K2);
  if (!(t <= kTailTolerance)) throw TruncationError(K2, t, depth(), suggested_depth(K2));
}

namespace {

struct SeriesSums {
  Complex even_t;  // sum_n X~^(2n) delta^n
  Complex odd_t;   // sum_n X~^(2n-1) delta^(n-1)
  Complex odd_x;   // sum_n X^(2n-1) delta^(n-1)
  Complex even_x;  // sum_n X^(2n) delta^n
};

SeriesSums sums_at_node(const SppsBasis& basis, double delta, std::size_t j) {
  const int M = basis.depth();
  PowerSeries et{0.0, std::vector<Complex>(M + 1)};
  PowerSeries ex{0.0, std::vector<Complex>(M + 1)};
  PowerSeries ot{0.0, std::vector<Complex>(M)};
  PowerSeries ox{0.0, std::vector<Complex>(M)};
  for (int k = 0; k <= M; ++k) {
    et.coefficients[k] = basis.xt(2 * k)[j];
    ex.coefficients[k] = basis.x(2 * k)[j];
    if (k >= 1) {
      ot.coefficients[k - 1] = basis.xt(2 * k - 1)[j];
      ox.coefficients[k - 1] = basis.x(2 * k - 1)[j];
    }
  }
  return {eval_series(et, delta), eval_series(ot, delta), eval_series(ox, delta),
          eval_series(ex, delta)};
}

CellSolution assemble(const SppsBasis& basis, double K2, double delta, const SeriesSums& s,
                      Complex f0, Complex f0p) {
  const Complex a0 = basis.f0_at_0();
  const Complex ap0 = basis.f0_prime_at_0();
  const Complex f0sq = f0 * f0;
  const Complex d_even_t = -delta * s.odd_t / f0sq;  // d/dx sum X~^(2n) delta^n
  const Complex d_odd_x = -s.even_x / f0sq;          // d/dx sum X^(2n-1) delta^(n-1)

  CellSolution out;
  out.K2 = K2;
  out.f1 = f0 / a0 * s.even_t + ap0 * f0 * s.odd_x;
  out.f2 = -a0 * f0 * s.odd_x;
  out.f1_prime = f0p / a0 * s.even_t + f0 / a0 * d_even_t + ap0 * (f0p * s.odd_x + f0 * d_odd_x);
  out.f2_prime = -a0 * (f0p * s.odd_x + f0 * d_odd_x);
  return out;
}

Complex lagrange4(const Complex (&v)[4], double t) {
  // Nodes at 0, 1, 2, 3 in units of h.
  const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

}  // namespace

double truncation_tail(const SppsBasis& basis, double K2) { return basis.bound().tail(K2); }

CellSolution eval_cell_solutions_at_node(const SppsBasis& basis, double K2, std::size_t node) {
  if (node >= basis.grid().size()) {
    throw Error(ErrorKind::Range, fmt::format("node {} outside the cell grid", node));
  }
  basis.bound().require(K2);
  const double delta = K2 - basis.params().K0sq();
  return assemble(basis, K2, delta, sums_at_node(basis, delta, node), basis.f0()[node],
                  basis.f0_prime()[node]);
}

CellSolution eval_cell_solutions(const SppsBasis& basis, double K2, double x) {
  const Grid& grid = basis.grid();
  const double h = grid.spacing();
  if (!(x >= -1e-12 * h && x <= grid.length() + 1e-12 * h)) {
    throw Error(ErrorKind::Range,
                fmt::format("x = {:.17g} outside the zeroth cell [0, {:.17g}]", x, grid.length()));
  }
  const double u = std::clamp(x / h, 0.0, static_cast<double>(grid.n_intervals()));
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= 1e-9) {
    return eval_cell_solutions_at_node(basis, K2, static_cast<std::size_t>(nearest));
  }

  basis.bound().require(K2);
  const double delta = K2 - basis.params().K0sq();
  const std::size_t base = static_cast<std::size_t>(
      std::clamp(std::floor(u) - 1.0, 0.0, static_cast<double>(grid.n_intervals() - 3)));
  Complex et[4], ot[4], ox[4], ex[4];
  for (std::size_t i = 0; i < 4; ++i) {
    const SeriesSums s = sums_at_node(basis, delta, base + i);
    et[i] = s.even_t;
    ot[i] = s.odd_t;
    ox[i] = s.odd_x;
    ex[i] = s.even_x;
  }
  const double t = u - static_cast<double>(base);
  const SeriesSums interp{lagrange4(et, t), lagrange4(ot, t), lagrange4(ox, t), lagrange4(ex, t)};
  const SeedValue seed = basis.seed()(x);
  const Complex f0p = SingularSet::of(basis.params()).excludes(x)
                          ? Complex{std::numeric_limits<double>::quiet_NaN(), 0.0}
                          : seed.derivative;
  return assemble(basis, K2, delta, interp, seed.value, f0p);
}

std::vector<CellSolution> eval_cell_solutions(const SppsBasis& basis, double K2) {
  basis.bound().require(K2);
  const double delta = K2 - basis.params().K0sq();
  const std::size_t n = basis.grid().size();
  std::vector<CellSolution> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back(assemble(basis, K2, delta, sums_at_node(basis, delta, j), basis.f0()[j],
                           basis.f0_prime()[j]));
  }
  return out;
}

}  // namespace hillband

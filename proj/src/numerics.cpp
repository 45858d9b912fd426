#include "hillband/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "hillband/errors.hpp"

namespace hillband {

Grid::Grid(double length, int n_intervals) : n_intervals_(n_intervals) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::InvalidGrid, fmt::format("grid length must be positive, got {}", length));
  }
  if (n_intervals < 2 || n_intervals % 2 != 0) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("grid needs an even number of intervals >= 2, got {}", n_intervals));
  }
  spacing_ = length / n_intervals;
  points_.resize(static_cast<std::size_t>(n_intervals) + 1);
  for (int i = 0; i <= n_intervals; ++i) {
    points_[i] = length * (static_cast<double>(i) / n_intervals);
  }
  points_.front() = 0.0;
  points_.back() = length;
}

Samples cumulative_integral(const Grid& grid, std::span<const Complex> f) {
  const std::size_t n = grid.size();
  if (n < 3) {
    throw Error(ErrorKind::InvalidGrid, "cumulative integral needs at least 3 grid points");
  }
  if (f.size() != n) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("sample count {} does not match grid size {}", f.size(), n));
  }
  const double h = grid.spacing();
  Samples g(n);
  g[0] = 0.0;
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    g[i + 2] = g[i] + (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    // Half panel [x_i, x_{i+1}] from the cubic through four neighbouring nodes.
    Complex half;
    if (i + 3 < n) {
      half = (h / 24.0) * (9.0 * f[i] + 19.0 * f[i + 1] - 5.0 * f[i + 2] + f[i + 3]);
    } else if (i >= 1) {
      half = (h / 24.0) * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    } else {
      half = (h / 12.0) * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    }
    g[i + 1] = g[i] + half;
  }
  return g;
}

PowerSeries PowerSeries::derivative() const {
  PowerSeries d{center, {}};
  if (coefficients.size() <= 1) {
    d.coefficients = {Complex{0.0}};
    return d;
  }
  d.coefficients.resize(coefficients.size() - 1);
  for (std::size_t n = 1; n < coefficients.size(); ++n) {
    d.coefficients[n - 1] = static_cast<double>(n) * coefficients[n];
  }
  return d;
}

Complex eval_series(const PowerSeries& p, Complex t) {
  if (p.coefficients.empty()) {
    throw Error(ErrorKind::InvalidParameter, "power series has no coefficients");
  }
  const Complex u = t - p.center;
  Complex acc = p.coefficients.back();
  for (auto it = p.coefficients.rbegin() + 1; it != p.coefficients.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc;
}

double find_bracketed_root(const RealFunction& phi, double a, double b, double tol) {
  if (!(a < b) || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("root bracket needs a < b and tol > 0 (a={}, b={}, tol={})", a, b, tol));
  }
  double fa = phi(a);
  double fb = phi(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw Error(ErrorKind::Bracket,
                fmt::format("no sign change on [{}, {}] (phi = {}, {})", a, b, fa, fb));
  }

  int slow_steps = 0;
  for (int iter = 0; iter < 400; ++iter) {
    const double width = b - a;
    double x = b - fb * (b - a) / (fb - fa);
    if (slow_steps >= 2 || !(x > a && x < b)) {
      x = 0.5 * (a + b);
      slow_steps = 0;
    }
    const double fx = phi(x);
    if (std::abs(fx) <= tol) return x;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= tol) return std::abs(fa) <= std::abs(fb) ? a : b;
    slow_steps = (b - a > 0.5 * width) ? slow_steps + 1 : 0;
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

double find_bracketed_extremum(const RealFunction& phi, double a, double b, double tol) {
  if (!(a < b) || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("extremum bracket needs a < b and tol > 0 (a={}, b={}, tol={})", a, b,
                            tol));
  }
  constexpr int kProbes = 16;
  std::array<double, kProbes + 1> xs{};
  std::array<double, kProbes + 1> fs{};
  for (int i = 0; i <= kProbes; ++i) {
    xs[i] = a + (b - a) * i / kProbes;
    fs[i] = phi(xs[i]);
  }
  const auto interior_begin = fs.begin() + 1;
  const auto interior_end = fs.end() - 1;
  const auto lo = std::min_element(interior_begin, interior_end);
  const auto hi = std::max_element(interior_begin, interior_end);

  double sign;
  std::ptrdiff_t best;
  if (*lo < std::min(fs.front(), fs.back())) {
    sign = 1.0;
    best = lo - fs.begin();
  } else if (*hi > std::max(fs.front(), fs.back())) {
    sign = -1.0;
    best = hi - fs.begin();
  } else {
    throw Error(ErrorKind::ExtremumNotBracketed,
                fmt::format("no interior extremum on [{}, {}]: endpoint pattern is monotone", a, b));
  }

  // Golden-section minimisation of sign * phi.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo_x = xs[best - 1];
  double hi_x = xs[best + 1];
  double c = hi_x - inv_phi * (hi_x - lo_x);
  double d = lo_x + inv_phi * (hi_x - lo_x);
  double fc = sign * phi(c);
  double fd = sign * phi(d);
  while (hi_x - lo_x > tol) {
    if (fc < fd) {
      hi_x = d;
      d = c;
      fd = fc;
      c = hi_x - inv_phi * (hi_x - lo_x);
      fc = sign * phi(c);
    } else {
      lo_x = c;
      c = d;
      fc = fd;
      d = lo_x + inv_phi * (hi_x - lo_x);
      fd = sign * phi(d);
    }
  }
  return 0.5 * (lo_x + hi_x);
}

}  // namespace hillband

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace hillband {

using Complex = std::complex<double>;
using Samples = std::vector<Complex>;

/// Uniform grid on [0, length] with an even number of intervals.
class Grid {
 public:
  /// Throws InvalidGrid unless `n_intervals` is even and >= 2 and length > 0.
  Grid(double length, int n_intervals);

  int n_intervals() const noexcept { return n_intervals_; }
  std::size_t size() const noexcept { return points_.size(); }
  double spacing() const noexcept { return spacing_; }
  double length() const noexcept { return points_.back(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const noexcept { return points_; }

 private:
  int n_intervals_;
  double spacing_;
  std::vector<double> points_;
};

/// Running integral g(x_i) = int_0^{x_i} f on the grid. Even nodes use the
/// composite Simpson rule; odd nodes add a cubic-interpolated half panel to
/// the preceding even node, so every node is O(h^4) and g(x_0) = 0 exactly.
Samples cumulative_integral(const Grid& grid, std::span<const Complex> f);

/// Truncated power series sum_n c_n (t - center)^n.
struct PowerSeries {
  Complex center{};
  std::vector<Complex> coefficients;

  /// Term-wise derivative with respect to t.
  PowerSeries derivative() const;
};

/// Horner evaluation; throws InvalidParameter on an empty coefficient list.
Complex eval_series(const PowerSeries& p, Complex t);

using RealFunction = std::function<double(double)>;

/// Safeguarded secant iteration inside a sign-change bracket. Returns r with
/// |phi(r)| <= tol or a final bracket no wider than tol.
double find_bracketed_root(const RealFunction& phi, double a, double b, double tol = 1e-10);

/// Golden-section search for the single interior minimum or maximum of phi on
/// [a, b]. The direction is detected from probe samples; a monotone pattern
/// raises ExtremumNotBracketed.
double find_bracketed_extremum(const RealFunction& phi, double a, double b, double tol = 1e-8);

}  // namespace hillband

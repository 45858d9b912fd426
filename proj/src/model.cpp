#include "hillband/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "hillband/errors.hpp"

namespace hillband {

ModelParams::ModelParams(double k0, double s) : k0_(k0), s_(s) {
  if (!(k0 > 0.0) || !std::isfinite(k0) || !std::isfinite(s)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("model needs finite k0 > 0 and finite s (k0={}, s={})", k0, s));
  }
  Lambda_ = std::numbers::pi / k0;
  K0sq_ = -(k0 + s) * (k0 + s);
}

SingularSet SingularSet::of(const ModelParams& p) {
  return {0.5 * p.Lambda(), 1e-6 * p.Lambda(), p.Lambda()};
}

double SingularSet::nearest_pole(double x) const noexcept {
  return cell_pole + std::round((x - cell_pole) / period) * period;
}

bool SingularSet::excludes(double x) const noexcept {
  return std::abs(x - nearest_pole(x)) <= exclusion_radius;
}

void SingularSet::require_regular(double x) const {
  if (excludes(x)) throw SingularityError(x, nearest_pole(x));
}

namespace {

double checked_tan(double x, const ModelParams& p) {
  SingularSet::of(p).require_regular(x);
  return std::tan(p.k0() * x);
}

}  // namespace

Complex superpotential_phi1(double x, const ModelParams& p) {
  return -p.k0() * checked_tan(x, p) + p.S();
}

Complex superpotential_phi1_derivative(double x, const ModelParams& p) {
  const double t = checked_tan(x, p);
  return -p.k0() * p.k0() * (1.0 + t * t);
}

Complex riccati_residual(double x, const ModelParams& p) {
  const Complex phi = superpotential_phi1(x, p);
  const Complex S = p.S();
  return superpotential_phi1_derivative(x, p) - 2.0 * S * phi + phi * phi + p.k0() * p.k0() +
         S * S;
}

Complex potential_nu1c(double x, const ModelParams& p) {
  const double t = checked_tan(x, p);
  const Complex S = p.S();
  return -p.k0() * p.k0() + S * S - 2.0 * S * p.k0() * t;
}

Complex potential_nu2c(double x, const ModelParams& p) {
  const double t = checked_tan(x, p);
  const Complex S = p.S();
  const double k0 = p.k0();
  return k0 * k0 + S * S - 2.0 * S * k0 * t + 2.0 * k0 * k0 * t * t;
}

ZeroEnergyPair closed_form_K2zero(double x, const ModelParams& p) {
  const SingularSet poles = SingularSet::of(p);
  const double k0 = p.k0();
  const double s = p.s();
  const Complex h1 = std::exp(p.S() * x) * std::cos(k0 * x);
  if (x == 0.0) return {h1, Complex{0.0}};

  // The integrand is regular on [0, x] only if no pole lies in between.
  const double lo = std::min(0.0, x);
  const double hi = std::max(0.0, x);
  const double first_pole = poles.nearest_pole(lo) < lo ? poles.nearest_pole(lo) + poles.period
                                                        : poles.nearest_pole(lo);
  if (first_pole <= hi + poles.exclusion_radius) throw SingularityError(x, first_pole);

  // e^{-2 S t} = cos(2 s t) - i sin(2 s t) for S = i s.
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double t) {
    const double c = std::cos(k0 * t);
    return std::cos(2.0 * s * t) / (c * c);
  };
  auto im = [&](double t) {
    const double c = std::cos(k0 * t);
    return -std::sin(2.0 * s * t) / (c * c);
  };
  const double I_re = gauss_kronrod<double, 31>::integrate(re, 0.0, x, 15, 1e-14);
  const double I_im = gauss_kronrod<double, 31>::integrate(im, 0.0, x, 15, 1e-14);
  return {h1, h1 * Complex{I_re, I_im}};
}

}  // namespace hillband

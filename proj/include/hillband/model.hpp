#pragma once

#include <complex>

namespace hillband {

using Complex = std::complex<double>;

/// Constants of the potential family. The coupling is S = i*s with real s;
/// the period is Lambda = pi/k0 and the series centre K0^2 = -(k0+s)^2.
class ModelParams {
 public:
  /// Throws InvalidParameter unless k0 > 0 and both values are finite.
  ModelParams(double k0, double s);

  double k0() const noexcept { return k0_; }
  double s() const noexcept { return s_; }
  Complex S() const noexcept { return {0.0, s_}; }
  double Lambda() const noexcept { return Lambda_; }
  double K0sq() const noexcept { return K0sq_; }

 private:
  double k0_;
  double s_;
  double Lambda_;
  double K0sq_;
};

/// Poles of tan(k0 x): cell_pole + m*Lambda for integer m.
struct SingularSet {
  double cell_pole;
  double exclusion_radius;
  double period;

  static SingularSet of(const ModelParams& p);

  double nearest_pole(double x) const noexcept;
  bool excludes(double x) const noexcept;
  /// Throws SingularityError when x is inside the exclusion radius.
  void require_regular(double x) const;
};

/// Phi1(x) = -k0 tan(k0 x) + S.
Complex superpotential_phi1(double x, const ModelParams& p);
/// Phi1'(x) = -k0^2 sec^2(k0 x).
Complex superpotential_phi1_derivative(double x, const ModelParams& p);

/// Phi1' - 2 S Phi1 + Phi1^2 + k0^2 + S^2 with the analytic derivative.
Complex riccati_residual(double x, const ModelParams& p);

/// Potential of the f-equation: -k0^2 + S^2 - 2 S k0 tan(k0 x).
Complex potential_nu1c(double x, const ModelParams& p);
/// Potential of the partner g-equation: k0^2 + S^2 - 2 S k0 tan + 2 k0^2 tan^2.
Complex potential_nu2c(double x, const ModelParams& p);

struct ZeroEnergyPair {
  Complex h1;
  Complex h2;
};

/// The two K^2 = 0 solutions of the f-equation: h1 = e^{Sx} cos(k0 x) and
/// h2 = h1 * int_0^x e^{-2 S t} / cos^2(k0 t) dt. Throws SingularityError if
/// [0, x] reaches a pole.
ZeroEnergyPair closed_form_K2zero(double x, const ModelParams& p);

}  // namespace hillband

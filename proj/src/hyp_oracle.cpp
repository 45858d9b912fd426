#include "hillband/hyp_oracle.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hillband/errors.hpp"

namespace hillband {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// z(x) = -e^{-2 i k0 x}, the argument shared by every closed form.
Complex unit_circle_argument(double x, double k0) {
  const double phase = 2.0 * k0 * x;
  return -Complex{std::cos(phase), -std::sin(phase)};
}

Complex multivalued_prefactor(Complex q1) { return std::exp(kI * kPi * (q1 - 0.5)); }

void require_nondegenerate(Complex P, double K2, const ModelParams& p) {
  const Complex nu = P / p.k0();
  const double n = std::round(nu.real());
  if (std::abs(nu.imag()) < 1e-9 && n >= 0.0 && std::abs(nu.real() - n) < 1e-9) {
    throw Error(ErrorKind::DegeneratePair,
                fmt::format("K2 = {:.17g} is a band edge (P/k0 = {}); the Bloch pair degenerates",
                            K2, n));
  }
}

struct HypTerms {
  Complex p1, q1, P, z, dzdx, pref;
  Complex F1, dF1, F2, dF2;
};

HypTerms f_terms(double x, double K2, const ModelParams& p) {
  HypTerms t;
  const HypExponents e = hyp_exponents(K2, p);
  t.p1 = e.p1;
  t.q1 = e.q1;
  t.P = quasimomentum(K2, p);
  require_nondegenerate(t.P, K2, p);
  t.z = unit_circle_argument(x, p.k0());
  t.dzdx = -2.0 * kI * p.k0() * t.z;
  t.pref = multivalued_prefactor(t.q1);

  const Complex a1 = t.p1 + t.q1 - 1.0, b1 = t.p1 - t.q1, c1 = 2.0 * t.p1;
  const Complex a2 = t.q1 - t.p1, b2 = 1.0 - t.p1 - t.q1, c2 = 2.0 - 2.0 * t.p1;
  t.F1 = gauss_2f1(a1, b1, c1, t.z);
  t.dF1 = gauss_2f1_derivative(a1, b1, c1, t.z);
  t.F2 = gauss_2f1(a2, b2, c2, t.z);
  t.dF2 = gauss_2f1_derivative(a2, b2, c2, t.z);
  return t;
}

}  // namespace

HypExponents hyp_exponents(double K2, const ModelParams& p) {
  const double k0 = p.k0();
  const double s = p.s();
  const Complex root_p = std::sqrt(Complex{(k0 + s) * (k0 + s) + K2, 0.0});
  const Complex root_q = std::sqrt(Complex{(k0 - s) * (k0 - s) + K2, 0.0});
  return {0.5 * (1.0 + root_p / k0), 0.5 * (1.0 + root_q / k0)};
}

Complex quasimomentum(double K2, const ModelParams& p) {
  const double k0s = p.k0() + p.s();
  return std::sqrt(Complex{k0s * k0s + K2, 0.0});
}

Complex reduce_to_brillouin_zone(Complex P, double k0) {
  const double period = 2.0 * k0;
  double re = std::fmod(P.real(), period);
  double im = P.imag();
  if (re < 0.0) re += period;
  if (re > k0) {
    re = period - re;
    im = -im;
  }
  return {re, im};
}

BlochPairExact exact_f_solutions(double x, double K2, const ModelParams& p) {
  const HypTerms t = f_terms(x, K2, p);
  const Complex e1 = std::exp(-kI * t.P * x);
  const Complex e2 = std::exp(kI * t.P * x);
  return {
      t.pref * e1 * t.F1,
      t.pref * e2 * t.F2,
      t.pref * e1 * (-kI * t.P * t.F1 + t.dF1 * t.dzdx),
      t.pref * e2 * (kI * t.P * t.F2 + t.dF2 * t.dzdx),
  };
}

BlochPairExact exact_g_solutions(double x, double K2, const ModelParams& p) {
  const Complex phi = superpotential_phi1(x, p);  // throws near poles
  const HypTerms t = f_terms(x, K2, p);
  const double k0 = p.k0();
  const Complex S = p.S();
  const double tn = std::tan(k0 * x);
  const Complex e1 = std::exp(-kI * t.P * x);
  const Complex e2 = std::exp(kI * t.P * x);
  const Complex shift = -t.z;  // e^{-2 i k0 x}
  const Complex p1 = t.p1, q1 = t.q1;
  const Complex nu = 2.0 * p1 - 1.0;
  const Complex ab = (p1 + q1 - 1.0) * (p1 - q1);

  const Complex F1_up = gauss_2f1(p1 + q1, p1 - q1 + 1.0, 2.0 * p1 + 1.0, t.z);
  const Complex F2_up = gauss_2f1(-p1 + q1 + 1.0, -p1 - q1 + 2.0, 3.0 - 2.0 * p1, t.z);

  const Complex g1 = t.pref * e1 *
                     ((k0 * tn - S - kI * k0 * nu) * t.F1 + ab / p1 * kI * k0 * shift * F1_up);
  const Complex g2 = t.pref * e2 * ((k0 * tn - S + kI * k0 * nu) * t.F2 +
                                    ab / (1.0 - p1) * kI * k0 * shift * F2_up);
  const Complex f1 = t.pref * e1 * t.F1;
  const Complex f2 = t.pref * e2 * t.F2;
  return {g1, g2, -K2 * f1 - phi * g1, -K2 * f2 - phi * g2};
}

namespace {

Complex f0_parameter(const ModelParams& p) {
  return kI * std::sqrt(Complex{p.s() / p.k0(), 0.0});
}

}  // namespace

Complex f0_bandedge(double x, const ModelParams& p) {
  const Complex a = f0_parameter(p);
  return gauss_2f1(a, -a, 1.0, unit_circle_argument(x, p.k0()));
}

Complex f0_bandedge_derivative(double x, const ModelParams& p) {
  const Complex a = f0_parameter(p);
  const Complex z = unit_circle_argument(x, p.k0());
  return gauss_2f1_derivative(a, -a, 1.0, z) * (-2.0 * kI * p.k0() * z);
}

const char* to_string(EdgeParity parity) noexcept {
  return parity == EdgeParity::periodic ? "periodic" : "antiperiodic";
}

double bandedge_K2(int n, EdgeParity parity, const ModelParams& p) {
  const double mult = parity == EdgeParity::periodic ? 2.0 * n : 2.0 * n + 1.0;
  const double P = mult * p.k0();
  const double k0s = p.k0() + p.s();
  return P * P - k0s * k0s;
}

Complex bandedge_exact_solution(int n, EdgeParity parity, double x, const ModelParams& p) {
  if (n < 0) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("band-edge index must be >= 0, got {}", n));
  }
  const double k0 = p.k0();
  const double nd = static_cast<double>(n);
  const Complex z = unit_circle_argument(x, k0);
  if (parity == EdgeParity::periodic) {
    const Complex q1 = 0.5 + std::sqrt(Complex{nd * nd - p.s() / k0, 0.0});
    return multivalued_prefactor(q1) * std::exp(-2.0 * kI * nd * k0 * x) *
           gauss_2f1(nd - 0.5 + q1, nd + 0.5 - q1, 1.0 + 2.0 * nd, z);
  }
  const Complex q1 = 0.5 + std::sqrt(Complex{(nd + 0.5) * (nd + 0.5) - p.s() / k0, 0.0});
  return multivalued_prefactor(q1) * std::exp(-kI * (2.0 * nd + 1.0) * k0 * x) *
         gauss_2f1(nd + q1, nd + 1.0 - q1, 2.0 * nd + 2.0, z);
}

NormalizedOracle::NormalizedOracle(Problem problem, double K2, const ModelParams& p)
    : problem_(problem), K2_(K2), params_(p) {
  const BlochPairExact at0 = pair_at(0.0);
  const Complex det = at0.first * at0.second_prime - at0.second * at0.first_prime;
  w_[0][0] = at0.second_prime / det;
  w_[0][1] = -at0.first_prime / det;
  w_[1][0] = -at0.second / det;
  w_[1][1] = at0.first / det;
}

BlochPairExact NormalizedOracle::pair_at(double x) const {
  return problem_ == Problem::f ? exact_f_solutions(x, K2_, params_)
                                : exact_g_solutions(x, K2_, params_);
}

NormalizedSolutions NormalizedOracle::at(double x) const {
  const BlochPairExact e = pair_at(x);
  return {
      w_[0][0] * e.first + w_[0][1] * e.second,
      w_[1][0] * e.first + w_[1][1] * e.second,
      w_[0][0] * e.first_prime + w_[0][1] * e.second_prime,
      w_[1][0] * e.first_prime + w_[1][1] * e.second_prime,
  };
}

}  // namespace hillband

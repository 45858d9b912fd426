#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hillband/errors.hpp"
#include "hillband/hyp_oracle.hpp"

namespace hillband {

namespace {

constexpr double kTermTol = 1e-16;
constexpr long kMaxTerms = 1'000'000;
constexpr double kOneMinusZRadius = 0.5;
constexpr double kSeriesRadius = 0.85;
constexpr double kIntegerSnap = 1e-12;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// Tracks the "two consecutive negligible terms" stopping rule.
class Settling {
 public:
  bool update(Complex term, Complex sum) {
    const double mag = std::abs(term);
    quiet_ = (mag <= kTermTol * std::abs(sum) || mag < 1e-300) ? quiet_ + 1 : 0;
    return quiet_ >= 2;
  }

 private:
  int quiet_ = 0;
};

[[noreturn]] void throw_nonconvergence(Complex a, Complex b, Complex c, Complex z, const char* where) {
  throw Error(ErrorKind::NonConvergence,
              fmt::format("2F1({}{:+}i, {}{:+}i; {}{:+}i; {}{:+}i) did not converge ({})", a.real(),
                          a.imag(), b.real(), b.imag(), c.real(), c.imag(), z.real(), z.imag(),
                          where));
}

struct ValueAndSlope {
  Complex value;
  Complex slope;
};

// Maclaurin series with its term-wise derivative. Terminates exactly when a
// or b is a non-positive integer.
ValueAndSlope direct_series(Complex a, Complex b, Complex c, Complex z) {
  Complex coef = 1.0;     // (a)_k (b)_k / ((c)_k k!)
  Complex zpow = 1.0;     // z^k
  Complex sum = 1.0;
  Complex dsum = 0.0;
  Settling settle;
  Settling dsettle;
  for (long k = 0; k < kMaxTerms; ++k) {
    const double kk = static_cast<double>(k);
    coef *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0));
    if (coef == 0.0) return {sum, dsum};
    const Complex dterm = (kk + 1.0) * coef * zpow;
    zpow *= z;
    const Complex term = coef * zpow;
    sum += term;
    dsum += dterm;
    const bool s1 = settle.update(term, sum);
    const bool s2 = dsettle.update(dterm, dsum);
    if (s1 && s2) return {sum, dsum};
  }
  throw_nonconvergence(a, b, c, z, "direct series");
}

// 2F1(a, b; a+b+m; z) for integer m >= 0 and |1 - z| small: the logarithmic
// connection formula around z = 1.
Complex around_one_integer(Complex a, Complex b, int m, Complex z) {
  const Complex c = a + b + static_cast<double>(m);
  const Complex w = 1.0 - z;
  if (w == 0.0) {
    if (m == 0) throw_nonconvergence(a, b, c, z, "logarithmic singularity at z = 1");
    // Gauss summation.
    return gamma(c) * std::tgamma(static_cast<double>(m)) * rgamma(a + static_cast<double>(m)) *
           rgamma(b + static_cast<double>(m));
  }

  Complex finite = 0.0;
  if (m > 0) {
    // sum_{k<m} (a)_k (b)_k (m-k-1)! / k! (z-1)^k
    Complex poch = 1.0;
    Complex zm1 = 1.0;
    double fact_ratio = std::tgamma(static_cast<double>(m));  // (m-1)!/0!
    for (int k = 0; k < m; ++k) {
      finite += poch * fact_ratio * zm1;
      poch *= (a + static_cast<double>(k)) * (b + static_cast<double>(k));
      zm1 *= -w;
      if (k + 1 < m) fact_ratio = fact_ratio / ((m - k - 1) * static_cast<double>(k + 1));
    }
    finite *= rgamma(a + static_cast<double>(m)) * rgamma(b + static_cast<double>(m));
  }

  const double md = static_cast<double>(m);
  const Complex lw = std::log(w);
  Complex psi_1 = digamma(Complex{1.0});
  Complex psi_m1 = digamma(Complex{md + 1.0});
  Complex psi_a = digamma(a + md);
  Complex psi_b = digamma(b + md);
  Complex coef = 1.0 / std::tgamma(md + 1.0);
  Complex wpow = 1.0;
  Complex sum = 0.0;
  Settling settle;
  long k = 0;
  for (; k < kMaxTerms; ++k) {
    const double kk = static_cast<double>(k);
    const Complex term = coef * wpow * (lw - psi_1 - psi_m1 + psi_a + psi_b);
    sum += term;
    if (settle.update(term, sum) && std::abs(coef * wpow) <= kTermTol * std::abs(sum)) break;
    coef *= (a + md + kk) * (b + md + kk) / ((kk + 1.0) * (kk + md + 1.0));
    psi_1 += 1.0 / (kk + 1.0);
    psi_m1 += 1.0 / (kk + md + 1.0);
    psi_a += 1.0 / (a + md + kk);
    psi_b += 1.0 / (b + md + kk);
    wpow *= w;
  }
  if (k == kMaxTerms) throw_nonconvergence(a, b, c, z, "connection series at z = 1");

  Complex zm1_m = 1.0;
  for (int j = 0; j < m; ++j) zm1_m *= -w;
  const Complex log_part = zm1_m * rgamma(a) * rgamma(b) * sum;
  return gamma(c) * (finite - log_part);
}

Complex around_one(Complex a, Complex b, Complex c, Complex z) {
  const Complex d = c - a - b;
  const double m_real = std::round(d.real());
  if (std::abs(d.imag()) < kIntegerSnap && std::abs(d.real() - m_real) < kIntegerSnap) {
    const int m = static_cast<int>(m_real);
    if (m >= 0) return around_one_integer(a, c - a - static_cast<double>(m), m, z);
    // Euler: 2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a, c-b; c; z).
    const Complex ca = c - a;
    return std::pow(1.0 - z, static_cast<double>(m)) *
           around_one_integer(ca, c - ca + static_cast<double>(m), -m, z);
  }
  const Complex w = 1.0 - z;
  const Complex t1 = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b) *
                     direct_series(a, b, 1.0 - d, w).value;
  const Complex t2 = std::pow(w, d) * gamma(c) * gamma(-d) * rgamma(a) * rgamma(b) *
                     direct_series(c - a, c - b, 1.0 + d, w).value;
  return t1 + t2;
}

// Re-expands the hypergeometric ODE in Taylor series along the ray from
// |z| = 1/2 to z, stepping half a convergence radius at a time.
Complex taylor_continuation(Complex a, Complex b, Complex c, Complex z) {
  Complex center = z * (0.5 / std::abs(z));
  ValueAndSlope state = direct_series(a, b, c, center);
  for (int step = 0; step < 200; ++step) {
    const double radius = std::min(std::abs(center), std::abs(1.0 - center));
    const double dist = std::abs(z - center);
    const bool last = dist <= 0.5 * radius;
    const Complex target = last ? z : center + (z - center) * (0.5 * radius / dist);
    const Complex w = target - center;

    const Complex A = center * (1.0 - center);
    const Complex B = 1.0 - 2.0 * center;
    const Complex C0 = c - (a + b + 1.0) * center;
    Complex t_prev = state.value;
    Complex t_curr = state.slope;
    Complex value = t_prev + t_curr * w;
    Complex slope = t_curr;
    Complex wpow = w;  // w^{k+1}
    Settling settle;
    Settling dsettle;
    long k = 0;
    for (; k < kMaxTerms; ++k) {
      const double kk = static_cast<double>(k);
      const Complex t_next =
          ((kk + a) * (kk + b) * t_prev - (B * kk + C0) * (kk + 1.0) * t_curr) /
          (A * (kk + 2.0) * (kk + 1.0));
      const Complex dterm = (kk + 2.0) * t_next * wpow;
      wpow *= w;
      const Complex term = t_next * wpow;
      value += term;
      slope += dterm;
      const bool s1 = settle.update(term, value);
      const bool s2 = dsettle.update(dterm, slope);
      if (s1 && s2) break;
      t_prev = t_curr;
      t_curr = t_next;
    }
    if (k == kMaxTerms) throw_nonconvergence(a, b, c, z, "Taylor continuation");
    state = {value, slope};
    center = target;
    if (last) return state.value;
  }
  throw_nonconvergence(a, b, c, z, "Taylor continuation path");
}

}  // namespace

Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z) {
  if (is_nonpositive_integer(c)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("2F1 undefined for c = {} (non-positive integer)", c.real()));
  }
  const double rz = std::abs(z);
  if (!(rz <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("2F1 evaluation restricted to |z| <= 1, got |z| = {}", rz));
  }
  if (a == 0.0 || b == 0.0 || z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return direct_series(a, b, c, z).value;
  }
  if (std::abs(1.0 - z) <= kOneMinusZRadius) return around_one(a, b, c, z);

  const double rp = rz / std::abs(z - 1.0);
  if (std::min(rz, rp) <= kSeriesRadius) {
    if (rz <= rp) return direct_series(a, b, c, z).value;
    // Pfaff: (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
    return std::exp(-a * std::log(1.0 - z)) * direct_series(a, c - b, c, z / (z - 1.0)).value;
  }
  return taylor_continuation(a, b, c, z);
}

Complex gauss_2f1_derivative(Complex a, Complex b, Complex c, Complex z) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

}  // namespace hillband

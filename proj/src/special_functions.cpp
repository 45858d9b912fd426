#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hillband/errors.hpp"
#include "hillband/hyp_oracle.hpp"

namespace hillband {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

}  // namespace

Complex log_gamma(Complex z) {
  if (z.real() < 0.5) {
    if (is_nonpositive_integer(z)) {
      throw Error(ErrorKind::InvalidParameter,
                  fmt::format("Gamma has a pole at {}", z.real()));
    }
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  const Complex zm = z - 1.0;
  Complex acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    acc += kLanczos[i] / (zm + static_cast<double>(i));
  }
  const Complex t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(acc);
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

Complex digamma(Complex z) {
  if (is_nonpositive_integer(z)) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("digamma has a pole at {}", z.real()));
  }
  if (z.real() < 0.5) {
    return digamma(1.0 - z) - kPi / std::tan(kPi * z);
  }
  Complex shift = 0.0;
  while (std::abs(z) < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  // Asymptotic tail: -sum B_{2k} / (2k z^{2k}).
  const Complex tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return shift + std::log(z) - 0.5 * inv - tail;
}

}  // namespace hillband

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hillband/errors.hpp"
#include "hillband/model.hpp"

using namespace hillband;

namespace {

constexpr double kPi = std::numbers::pi;

double tangent(double x, const ModelParams& p) { return std::tan(p.k0() * x); }

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("derived constants") {
    const ModelParams p(2.0, 0.7);
    CHECK(p.Lambda() * p.k0() == doctest::Approx(kPi).epsilon(1e-16));
    CHECK(p.K0sq() == doctest::Approx(-2.7 * 2.7).epsilon(1e-15));
    CHECK(p.S() == Complex{0.0, 0.7});
    CHECK_THROWS_AS(ModelParams(0.0, 0.1), Error);
    CHECK_THROWS_AS(ModelParams(1.0, NAN), Error);
  }

  TEST_CASE("singular set") {
    const ModelParams p(1.0, 0.1);
    const SingularSet poles = SingularSet::of(p);
    CHECK(poles.cell_pole == doctest::Approx(kPi / 2));
    CHECK(poles.exclusion_radius == doctest::Approx(1e-6 * kPi));
    CHECK(poles.nearest_pole(4.0) == doctest::Approx(1.5 * kPi));
    CHECK(poles.excludes(kPi / 2 + 1e-7));
    CHECK_FALSE(poles.excludes(kPi / 2 + 1e-4));
    CHECK(poles.nearest_pole(-0.2) == doctest::Approx(-kPi / 2));
  }

  TEST_CASE("superpotential values") {
    const ModelParams p(1.0, 0.1);
    CHECK(std::abs(superpotential_phi1(0.0, p) - Complex{0.0, 0.1}) <= 1e-15);
    CHECK(std::abs(superpotential_phi1(kPi / 4, p) - Complex{-1.0, 0.1}) <= 1e-15);
    try {
      superpotential_phi1(kPi / 2, p);
      FAIL("expected a singularity error");
    } catch (const SingularityError& e) {
      CHECK(e.kind() == ErrorKind::Singularity);
      CHECK(e.pole() == doctest::Approx(kPi / 2));
    }
  }

  TEST_CASE("Riccati residual vanishes") {
    CHECK(std::abs(riccati_residual(0.3, ModelParams(1.0, 0.1))) <= 1e-13);
    CHECK(std::abs(riccati_residual(1.0, ModelParams(2.0, 0.7))) <= 1e-13);
    // s = 0: R = -k0 tan(k0 x) solves R' + R^2 + k0^2 = 0.
    const ModelParams free(1.0, 0.0);
    const double x = 0.5;
    const double R = -std::tan(x);
    const double dR = -1.0 / (std::cos(x) * std::cos(x));
    CHECK(std::abs(dR + R * R + 1.0) <= 1e-13);
    CHECK(std::abs(riccati_residual(x, free)) <= 1e-13);
    CHECK_THROWS_AS(riccati_residual(kPi / 2, free), SingularityError);
  }

  TEST_CASE("potentials at the origin") {
    const ModelParams p(1.0, 0.1);
    CHECK(std::abs(potential_nu1c(0.0, p) - (-1.01)) <= 1e-15);
    CHECK(std::abs(potential_nu2c(0.0, p) - 0.99) <= 1e-15);
    const ModelParams free(1.3, 0.0);
    for (double x : {0.1, 0.7, 2.0, 5.0}) {
      CHECK(std::abs(potential_nu1c(x, free) - (-1.69)) <= 1e-13);
    }
    CHECK_THROWS_AS(potential_nu2c(kPi / 2, p), SingularityError);
  }

  TEST_CASE("property: Phi1 is Lambda-periodic") {
    for (double s : {0.0, 0.1, 1.5}) {
      const ModelParams p(1.7, s);
      for (double x : {0.05, 0.3, 0.61, 1.2, 1.7}) {
        const Complex a = superpotential_phi1(x, p);
        for (int m : {-2, 1, 3}) {
          CHECK(std::abs(superpotential_phi1(x + m * p.Lambda(), p) - a) <= 1e-12 * (1.0 + std::abs(a)));
        }
      }
    }
  }

  TEST_CASE("property: partner potentials differ by 2 k0^2 sec^2") {
    for (double s : {0.0, 0.1, 0.7}) {
      const ModelParams p(1.3, s);
      for (double x : {0.0, 0.2, 0.9, 1.4, 2.2}) {
        const double t = tangent(x, p);
        const Complex diff = potential_nu2c(x, p) - potential_nu1c(x, p);
        CHECK(std::abs(diff - 2.0 * p.k0() * p.k0() * (1.0 + t * t)) <= 1e-12 * (1.0 + t * t));
      }
    }
  }

  TEST_CASE("property: SUSY factorisation of both potentials") {
    for (double s : {0.0, 0.1, 0.7, 1.5}) {
      const ModelParams p(1.0, s);
      for (double x : {0.01, 0.4, 1.0, 1.3, 2.0, 3.0}) {
        const Complex phi = superpotential_phi1(x, p);
        const Complex dphi = superpotential_phi1_derivative(x, p);
        const double scale = 1.0 + std::norm(phi);
        CHECK(std::abs(dphi + phi * phi - potential_nu1c(x, p)) <= 1e-12 * scale);
        CHECK(std::abs(-dphi + phi * phi - potential_nu2c(x, p)) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("s = 0 reduces to the free pair") {
    const ModelParams p(1.0, 0.0);
    for (double x : {0.2, 0.9, 2.5}) {
      const double t = tangent(x, p);
      CHECK(std::abs(potential_nu1c(x, p) + 1.0) <= 1e-14);
      CHECK(std::abs(potential_nu2c(x, p) - (1.0 + 2.0 * t * t)) <= 1e-12);
    }
  }

  TEST_CASE("zero-energy solutions") {
    const ModelParams p(1.0, 0.1);
    const ZeroEnergyPair at0 = closed_form_K2zero(0.0, p);
    CHECK(at0.h1 == Complex{1.0});
    CHECK(at0.h2 == Complex{0.0});

    const double x = 0.4, h = 1e-4;
    const auto residual = [&](auto pick) {
      const Complex fm = pick(closed_form_K2zero(x - h, p));
      const Complex f0 = pick(closed_form_K2zero(x, p));
      const Complex fp = pick(closed_form_K2zero(x + h, p));
      return -(fp - 2.0 * f0 + fm) / (h * h) + potential_nu1c(x, p) * f0;
    };
    CHECK(std::abs(residual([](const ZeroEnergyPair& z) { return z.h1; })) <= 1e-6);
    CHECK(std::abs(residual([](const ZeroEnergyPair& z) { return z.h2; })) <= 1e-6);
    CHECK_THROWS_AS(closed_form_K2zero(2.0, p), SingularityError);
  }

  TEST_CASE("zero-energy Wronskian is one") {
    const ModelParams p(1.0, 0.7);
    const double h = 1e-5;
    for (double x : {0.3, 1.1}) {
      const ZeroEnergyPair a = closed_form_K2zero(x, p);
      const ZeroEnergyPair l = closed_form_K2zero(x - h, p);
      const ZeroEnergyPair r = closed_form_K2zero(x + h, p);
      const Complex d1 = (r.h1 - l.h1) / (2 * h), d2 = (r.h2 - l.h2) / (2 * h);
      CHECK(std::abs(a.h1 * d2 - d1 * a.h2 - 1.0) <= 1e-8);
    }
  }
}

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hillband/errors.hpp"
#include "hillband/hyp_oracle.hpp"
#include "hillband/spps.hpp"
#include "support.hpp"

using namespace hillband;
using hillband::testing::shared_basis;

namespace {

constexpr double kPi = std::numbers::pi;

SeedFunction scaled_seed(const ModelParams& p, Complex c) {
  return [p, c](double x) {
    return SeedValue{c * f0_bandedge(x, p), c * f0_bandedge_derivative(x, p)};
  };
}

}  // namespace

TEST_SUITE("spps") {
  TEST_CASE("free tables are explicit iterated integrals") {
    const SppsBasis& b = shared_basis(0.0, 2000, 10);
    const std::size_t mid = 1000;
    const double x = b.grid()[mid];
    CHECK(x == doctest::Approx(kPi / 2));
    CHECK(std::abs(b.xt(1)[mid] - x) <= 1e-10);
    CHECK(std::abs(b.xt(2)[mid] + 0.5 * x * x) <= 1e-10);
    CHECK(std::abs(b.x(1)[mid] + x) <= 1e-10);
    CHECK(std::abs(b.x(2)[mid] + 0.5 * x * x) <= 1e-10);
  }

  TEST_CASE("table structure") {
    const SppsBasis& b = shared_basis(0.1, 2000, 30);
    for (std::size_t j = 0; j < b.grid().size(); j += 97) {
      CHECK(b.xt(0)[j] == Complex{1.0});
      CHECK(b.x(0)[j] == Complex{1.0});
    }
    for (int n = 1; n <= 60; ++n) {
      CHECK(b.xt(n)[0] == Complex{0.0});
      CHECK(b.x(n)[0] == Complex{0.0});
    }
    CHECK(b.f0().front() == b.f0().back());
  }

  TEST_CASE("top level decays factorially") {
    const SppsBasis& b = shared_basis(0.1, 2000, 30);
    const double delta = 10.0 - b.params().K0sq();
    double worst = 0.0;
    for (const Complex v : b.xt(60)) worst = std::max(worst, std::abs(v));
    CHECK(worst * std::pow(delta, 30) < 1e-12);
  }

  TEST_CASE("build errors") {
    const ModelParams p(1.0, 0.1);
    CHECK_THROWS_AS(build_basis(p, 2001, 40), Error);
    CHECK_THROWS_AS(build_basis(p, 32, 40), Error);
    CHECK_THROWS_AS(build_basis(p, 2000, 0), Error);
    try {
      const SeedFunction vanishing = [](double x) {
        return SeedValue{std::cos(x), -std::sin(x)};
      };
      SppsBasis(p, Grid(p.Lambda(), 200), vanishing, 10);
      FAIL("expected a nodeless-seed error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SeedNotNodeless);
    }
  }

  TEST_CASE("initial conditions") {
    const SppsBasis& b = shared_basis(0.1);
    for (double K2 : {-2.0, 0.25, 6.25, 20.0}) {
      const CellSolution c = eval_cell_solutions(b, K2, 0.0);
      CHECK(std::abs(c.f1 - 1.0) <= 1e-14);
      CHECK(std::abs(c.f2) <= 1e-14);
      CHECK(std::abs(c.f1_prime) <= 1e-14);
      CHECK(std::abs(c.f2_prime - 1.0) <= 1e-14);
    }
  }

  TEST_CASE("free solutions are trigonometric") {
    const SppsBasis& b = shared_basis(0.0);
    const double K2 = 0.25, omega = std::sqrt(1.25);
    for (double x : {1.0, 0.123, 2.5, kPi}) {
      const CellSolution c = eval_cell_solutions(b, K2, x);
      CHECK(std::abs(c.f1 - std::cos(omega * x)) <= 1e-8);
      CHECK(std::abs(c.f2 - std::sin(omega * x) / omega) <= 1e-8);
      CHECK(std::abs(c.f1_prime + omega * std::sin(omega * x)) <= 1e-8);
      CHECK(std::abs(c.f2_prime - std::cos(omega * x)) <= 1e-8);
    }
  }

  TEST_CASE("series solutions match the exact ones") {
    const SppsBasis& b = shared_basis(0.1);
    for (double K2 : {0.25, 2.25, 6.25}) {
      const NormalizedOracle oracle(Problem::f, K2, b.params());
      for (double x : {0.5, 1.0, 1.5, 1.6, 2.2, 3.0}) {
        const CellSolution c = eval_cell_solutions(b, K2, x);
        const NormalizedSolutions o = oracle.at(x);
        CHECK(std::abs(c.f1 - o.u1) <= 1e-6);
        CHECK(std::abs(c.f2 - o.u2) <= 1e-6);
      }
    }
  }

  TEST_CASE("off-node interpolation agrees with node values") {
    const SppsBasis& b = shared_basis(0.1);
    const double h = b.grid().spacing();
    const std::size_t j = 1234;
    const CellSolution a = eval_cell_solutions_at_node(b, 2.25, j);
    const CellSolution c = eval_cell_solutions(b, 2.25, j * h + 1e-13);
    CHECK(std::abs(a.f1 - c.f1) <= 1e-12);
    const NormalizedOracle oracle(Problem::f, 2.25, b.params());
    const double x = (j + 0.37) * h;
    const CellSolution mid = eval_cell_solutions(b, 2.25, x);
    CHECK(std::abs(mid.f1 - oracle.at(x).u1) <= 1e-8);
    CHECK(std::abs(mid.f2_prime - oracle.at(x).u2_prime) <= 1e-8);
    CHECK_THROWS_AS(eval_cell_solutions(b, 2.25, -0.1), Error);
    CHECK_THROWS_AS(eval_cell_solutions(b, 2.25, b.params().Lambda() + 0.1), Error);
  }

  TEST_CASE("truncation tail") {
    CHECK(truncation_tail(shared_basis(0.1), shared_basis(0.1).params().K0sq()) == 0.0);
    CHECK(truncation_tail(shared_basis(0.0, 2000, 30), 10.0) <= 1e-10);
    const SppsBasis& shallow = shared_basis(0.1, 2000, 2);
    CHECK(truncation_tail(shallow, 50.0) > 1e-2);
    try {
      eval_cell_solutions(shallow, 50.0, 1.0);
      FAIL("expected a truncation error");
    } catch (const TruncationError& e) {
      CHECK(e.kind() == ErrorKind::Truncation);
      CHECK(e.depth() == 2);
      CHECK(e.suggested_depth() > 2);
      CHECK(std::string(e.what()).find("--spps-terms") != std::string::npos);
    }
  }

  TEST_CASE("suggested depth is sufficient") {
    const SppsBasis& b = shared_basis(0.1, 2000, 20);
    for (double K2 : {30.0, 60.0}) {
      const int suggested = b.bound().suggested_depth(K2);
      const SppsBasis deeper = build_basis(b.params(), 2000, suggested);
      CHECK(truncation_tail(deeper, K2) <= kTailTolerance);
    }
  }

  TEST_CASE("property: seed rescaling leaves the solutions unchanged") {
    const ModelParams p(1.0, 0.1);
    const Grid g(p.Lambda(), 2000);
    const SppsBasis ref(p, g, scaled_seed(p, 1.0), 30);
    for (Complex c : {Complex{2.0}, Complex{1.0, 1.0}}) {
      const SppsBasis scaled(p, g, scaled_seed(p, c), 30);
      for (double K2 : {0.25, 6.25}) {
        for (std::size_t j : {std::size_t{0}, std::size_t{333}, std::size_t{1500}, std::size_t{2000}}) {
          const CellSolution a = eval_cell_solutions_at_node(ref, K2, j);
          const CellSolution b = eval_cell_solutions_at_node(scaled, K2, j);
          CHECK(std::abs(a.f1 - b.f1) <= 1e-10);
          CHECK(std::abs(a.f2 - b.f2) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("property: Wronskian is one at every regular node") {
    const SppsBasis& b = shared_basis(0.1);
    const SingularSet poles = SingularSet::of(b.params());
    for (double K2 : {-1.0, 0.0, 0.25, 2.25, 6.25}) {
      const std::vector<CellSolution> all = eval_cell_solutions(b, K2);
      double worst = 0.0;
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (poles.excludes(b.grid()[j])) continue;
        const CellSolution& c = all[j];
        worst = std::max(worst, std::abs(c.f1 * c.f2_prime - c.f1_prime * c.f2 - 1.0));
      }
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("property: series solutions satisfy the f-equation") {
    const SppsBasis& b = shared_basis(0.1);
    const ModelParams& p = b.params();
    const SingularSet poles = SingularSet::of(p);
    const int stride = b.grid().n_intervals() / 2000;  // h = Lambda / 2000
    const double h = stride * b.grid().spacing();
    for (double K2 : {-1.0, 0.25, 2.25, 6.25}) {
      const std::vector<CellSolution> all = eval_cell_solutions(b, K2);
      double worst = 0.0;
      for (std::size_t j = stride; j + stride < all.size(); j += 7) {
        const double x = b.grid()[j];
        if (std::abs(x - poles.nearest_pole(x)) < p.Lambda() / 10) continue;
        const Complex d2 = (all[j + stride].f1 - 2.0 * all[j].f1 + all[j - stride].f1) / (h * h);
        worst = std::max(worst, std::abs(-d2 + potential_nu1c(x, p) * all[j].f1 - K2 * all[j].f1));
      }
      CHECK(worst <= 1e-5 * (1.0 + std::abs(K2)));
    }
  }

  TEST_CASE("property: error falls geometrically with depth") {
    // f1 = sum_n X~^(2n) delta^n for the free seed; sum it directly so that
    // depths below the truncation guard can be measured too.
    const double K2 = 6.25, omega = std::sqrt(1.0 + K2);
    const double delta = K2 + 1.0;
    std::vector<double> errors;
    for (int M = 10; M <= 30; M += 5) {
      const SppsBasis& b = shared_basis(0.0, 2000, M);
      const std::size_t end = b.grid().size() - 1;
      PowerSeries series{0.0, {}};
      for (int n = 0; n <= M; ++n) series.coefficients.push_back(b.xt(2 * n)[end]);
      errors.push_back(std::abs(eval_series(series, delta) - std::cos(omega * kPi)));
    }
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
      if (errors[i] < 1e-10) break;  // quadrature floor at N = 2000
      CHECK(errors[i + 1] <= 0.5 * errors[i]);
    }
    CHECK(errors.back() <= 1e-10);
    CHECK_THROWS_AS(eval_cell_solutions_at_node(shared_basis(0.0, 2000, 10), K2, 5), TruncationError);
  }
}

#include "hillband/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "hillband/errors.hpp"

namespace hillband {

namespace {

constexpr double kTransformFloor = 1e-8;
constexpr double kDecoupledFloor = 1e-12;

void require_transformable(double K2) {
  if (std::abs(K2) < kTransformFloor) {
    throw Error(ErrorKind::DegenerateTransform,
                fmt::format("Darboux partner undefined at K2 = {:.3e} (|K2| < {:.0e})", K2,
                            kTransformFloor));
  }
}

// g = f~' - Phi f~ and g' = -K^2 f~ - Phi g for the two combinations
// f~1 = (-S f1 + (K^2 - S^2) f2)/K^2 and f~2 = -(f1 + S f2)/K^2.
CellSolution transform(const CellSolution& c, Complex S, Complex phi) {
  const double K2 = c.K2;
  const Complex t1 = (-S * c.f1 + (K2 - S * S) * c.f2) / K2;
  const Complex t2 = -(c.f1 + S * c.f2) / K2;
  const Complex t1p = (-S * c.f1_prime + (K2 - S * S) * c.f2_prime) / K2;
  const Complex t2p = -(c.f1_prime + S * c.f2_prime) / K2;
  CellSolution g;
  g.K2 = K2;
  g.f1 = t1p - phi * t1;
  g.f2 = t2p - phi * t2;
  g.f1_prime = -K2 * t1 - phi * g.f1;
  g.f2_prime = -K2 * t2 - phi * g.f2;
  return g;
}

Monodromy from_endpoint(const CellSolution& c, Problem which) {
  return {c.K2, which, c.f1, c.f2, c.f1_prime, c.f2_prime};
}

}  // namespace

Monodromy monodromy_f(const SppsBasis& basis, double K2) {
  return from_endpoint(
      eval_cell_solutions_at_node(basis, K2, basis.grid().size() - 1), Problem::f);
}

Monodromy monodromy_g(const SppsBasis& basis, double K2) {
  return from_endpoint(darboux_partner_at_node(basis, K2, basis.grid().size() - 1), Problem::g);
}

SelfMatching self_matching(const Monodromy& m) {
  const Complex D = m.trace();
  const Complex disc = D * D - 4.0;
  if (std::abs(disc) < kDegeneracyFloor) {
    throw Error(ErrorKind::DegenerateEdge,
                fmt::format("K2 = {:.17g} is a band edge (D = {:.12g}); only one Bloch solution "
                            "exists there",
                            m.K2, D.real()));
  }
  const Complex root = std::sqrt(disc);
  SelfMatching sm;
  sm.r_plus = 0.5 * (D - root);
  sm.r_minus = 0.5 * (D + root);

  const double scale = 1.0 + std::abs(m.a11) + std::abs(m.a22);
  if (std::abs(m.a12) <= kDecoupledFloor * scale) {
    // Triangular monodromy: y2 is a Bloch solution with factor a22, and
    // y1 + alpha y2 carries a11.
    sm.decoupled = true;
    const Complex alpha = m.a21 / (m.a11 - m.a22);
    const Complex inf{std::numeric_limits<double>::infinity(), 0.0};
    const bool a11_is_plus = std::abs(m.a11 - sm.r_plus) <= std::abs(m.a11 - sm.r_minus);
    if (a11_is_plus) {
      sm.alpha_plus = alpha;
      sm.v_plus = alpha;
      sm.alpha_minus = inf;
      sm.u_minus = 0.0;
      sm.v_minus = 1.0;
    } else {
      sm.alpha_minus = alpha;
      sm.v_minus = alpha;
      sm.alpha_plus = inf;
      sm.u_plus = 0.0;
      sm.v_plus = 1.0;
    }
    return sm;
  }

  // a12 alpha^2 + (a11 - a22) alpha - a21 = 0; its discriminant equals
  // D^2 - 4 det. Take the larger-magnitude root first, the other from the
  // product -a21/a12.
  const Complex b = m.a11 - m.a22;
  const Complex sq = std::sqrt(b * b + 4.0 * m.a12 * m.a21);
  const Complex q = std::abs(b + sq) >= std::abs(b - sq) ? -0.5 * (b + sq) : -0.5 * (b - sq);
  const Complex alpha_a = q / m.a12;
  const Complex alpha_b = -m.a21 / q;
  const Complex r_a = m.a11 + alpha_a * m.a12;
  const bool a_is_plus = std::abs(r_a - sm.r_plus) <= std::abs(r_a - sm.r_minus);
  sm.alpha_plus = a_is_plus ? alpha_a : alpha_b;
  sm.alpha_minus = a_is_plus ? alpha_b : alpha_a;
  sm.v_plus = sm.alpha_plus;
  sm.v_minus = sm.alpha_minus;
  return sm;
}

HillSeries hill_series(const SppsBasis& basis) {
  const std::size_t end = basis.grid().size() - 1;
  const int M = basis.depth();
  PowerSeries series{basis.params().K0sq(), std::vector<Complex>(M + 1)};
  for (int n = 0; n <= M; ++n) {
    series.coefficients[n] = basis.xt(2 * n)[end] + basis.x(2 * n)[end];
  }
  PowerSeries slope = series.derivative();
  return {basis.params(), std::move(series), std::move(slope), basis.bound()};
}

Complex hill_eval(const HillSeries& hs, double K2) {
  hs.bound.require(K2);
  return eval_series(hs.series, K2);
}

Complex hill_derivative(const HillSeries& hs, double K2) {
  hs.bound.require(K2);
  return eval_series(hs.slope, K2);
}

bool in_band(Complex D, double im_tol) {
  return std::abs(D.real()) <= 2.0 && std::abs(D.imag()) <= im_tol;
}

Complex dispersion(const HillSeries& hs, double K2, double im_tol) {
  const Complex D = hill_eval(hs, K2);
  const double Lambda = hs.params.Lambda();
  if (std::abs(D.imag()) <= im_tol) {
    const double half = 0.5 * D.real();
    if (half > 1.0) return {0.0, std::acosh(half) / Lambda};
    if (half < -1.0) return {std::numbers::pi / Lambda, std::acosh(-half) / Lambda};
    return {std::acos(half) / Lambda, 0.0};
  }
  return std::acos(0.5 * D) / Lambda;
}

CellSolution darboux_partner(const SppsBasis& basis, double K2, double x) {
  require_transformable(K2);
  const Complex phi = superpotential_phi1(x, basis.params());  // throws near poles
  return transform(eval_cell_solutions(basis, K2, x), basis.params().S(), phi);
}

CellSolution darboux_partner_at_node(const SppsBasis& basis, double K2, std::size_t node) {
  require_transformable(K2);
  if (node >= basis.grid().size()) {
    throw Error(ErrorKind::Range, fmt::format("node {} outside the cell grid", node));
  }
  const Complex phi = superpotential_phi1(basis.grid()[node], basis.params());
  return transform(eval_cell_solutions_at_node(basis, K2, node), basis.params().S(), phi);
}

std::vector<std::optional<CellSolution>> darboux_partner(const SppsBasis& basis, double K2) {
  require_transformable(K2);
  const std::vector<CellSolution> cells = eval_cell_solutions(basis, K2);
  const SingularSet poles = SingularSet::of(basis.params());
  const Complex S = basis.params().S();
  std::vector<std::optional<CellSolution>> out(cells.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double x = basis.grid()[j];
    if (poles.excludes(x)) continue;
    out[j] = transform(cells[j], S, superpotential_phi1(x, basis.params()));
  }
  return out;
}

namespace {

Complex checked_power(Complex r, int n, double x) {
  const Complex p = std::pow(r, n);
  const double mag = std::abs(p);
  if (!std::isfinite(mag) || (mag == 0.0 && r != 0.0) ||
      (mag != 0.0 && mag < std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::Range,
                fmt::format("Bloch factor power r^{} leaves the double range at x = {:.17g}", n, x));
  }
  return p;
}

}  // namespace

BlochValues bloch_extend(const SelfMatching& sm, const CellPairFunction& cell, double x,
                         double Lambda) {
  const double cells = std::floor(x / Lambda);
  if (!(std::abs(cells) <= kMaxCellIndex)) {
    throw Error(ErrorKind::Range, fmt::format("x = {:.17g} lies {} cells from the zeroth cell "
                                              "(limit {})",
                                              x, cells, kMaxCellIndex));
  }
  const int n = static_cast<int>(cells);
  const double xi = std::clamp(x - n * Lambda, 0.0, Lambda);
  const BlochValues base = cell(xi);
  if (n == 0) return base;
  return {checked_power(sm.r_plus, n, x) * base.plus, checked_power(sm.r_minus, n, x) * base.minus};
}

namespace {

BlochValues combine(const SelfMatching& sm, Complex y1, Complex y2) {
  return {sm.u_plus * y1 + sm.v_plus * y2, sm.u_minus * y1 + sm.v_minus * y2};
}

// Orders the partner pair so that its + member carries the f-pair's r+.
SelfMatching align(SelfMatching g, const SelfMatching& f) {
  if (std::abs(g.r_plus - f.r_plus) > std::abs(g.r_minus - f.r_plus)) {
    std::swap(g.alpha_plus, g.alpha_minus);
    std::swap(g.r_plus, g.r_minus);
    std::swap(g.u_plus, g.u_minus);
    std::swap(g.v_plus, g.v_minus);
  }
  return g;
}

}  // namespace

BlochSolutions::BlochSolutions(const SppsBasis& basis, double K2)
    : basis_(&basis), K2_(K2), f_(self_matching(monodromy_f(basis, K2))) {
  if (std::abs(K2) >= kTransformFloor) g_ = align(self_matching(monodromy_g(basis, K2)), f_);
}

BlochValues BlochSolutions::f(double x) const {
  const CellPairFunction cell = [this](double xi) {
    const CellSolution c = eval_cell_solutions(*basis_, K2_, xi);
    return combine(f_, c.f1, c.f2);
  };
  return bloch_extend(f_, cell, x, basis_->params().Lambda());
}

std::optional<BlochValues> BlochSolutions::g(double x) const {
  if (!g_ || SingularSet::of(basis_->params()).excludes(x)) return std::nullopt;
  const CellPairFunction cell = [this](double xi) {
    const CellSolution c = darboux_partner(*basis_, K2_, xi);
    return combine(*g_, c.f1, c.f2);
  };
  return bloch_extend(*g_, cell, x, basis_->params().Lambda());
}

namespace {

void require_window(const HillSeries& hs, double k2_min, double k2_max) {
  const double K0sq = hs.params.K0sq();
  if (!(k2_min <= K0sq && K0sq < k2_max)) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("edge window [{:.17g}, {:.17g}] must contain K0^2 = {:.17g} with room "
                            "above it",
                            k2_min, k2_max, K0sq));
  }
  hs.bound.require(k2_min);
  hs.bound.require(k2_max);
}

double seed_edge(const HillSeries& hs) {
  const double K0sq = hs.params.K0sq();
  const double k0 = hs.params.k0();
  const double half_width = 0.25 * k0 * k0;
  const auto excess = [&](double K2) { return hill_eval(hs, K2).real() - 2.0; };
  const double lo = K0sq - half_width;
  const double hi = K0sq + half_width;
  if (excess(lo) * excess(hi) >= 0.0) return K0sq;
  return find_bracketed_root(excess, lo, hi, 1e-14 * (1.0 + std::abs(K0sq)));
}

}  // namespace

BandStructure find_band_edges(const HillSeries& hs, double k2_min, double k2_max,
                              const EdgeSearchOptions& options) {
  require_window(hs, k2_min, k2_max);
  if (options.probes < 16) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("edge search needs at least 16 probes, got {}", options.probes));
  }
  BandStructure bs;
  bs.window_min = k2_min;
  bs.window_max = k2_max;
  const double accept = 10.0 * options.edge_tol;

  const double K0sq = seed_edge(hs);
  std::vector<double> candidates;
  const auto slope = [&](double K2) { return hill_derivative(hs, K2).real(); };
  const double step = (k2_max - K0sq) / options.probes;
  double prev_x = K0sq + 0.5 * step;
  double prev_d = slope(prev_x);
  for (int i = 1; i <= options.probes; ++i) {
    const double x = std::min(K0sq + (i + 0.5) * step, k2_max);
    const double d = slope(x);
    if (prev_d == 0.0) {
      candidates.push_back(prev_x);
    } else if (prev_d * d < 0.0) {
      candidates.push_back(find_bracketed_root(slope, prev_x, x, options.root_tol));
    }
    prev_x = x;
    prev_d = d;
    if (x >= k2_max) break;
  }

  int periodic = 0;
  int antiperiodic = 0;
  const auto push_edge = [&](double K2, Complex D) {
    const EdgeParity parity = D.real() > 0.0 ? EdgeParity::periodic : EdgeParity::antiperiodic;
    const int index = parity == EdgeParity::periodic ? periodic++ : antiperiodic++;
    bs.edges.push_back({K2, parity, index, D, std::abs(std::abs(D) - 2.0)});
  };
  push_edge(K0sq, hill_eval(hs, K0sq));
  for (double K2 : candidates) {
    const Complex D = hill_eval(hs, K2);
    if (std::abs(std::abs(D) - 2.0) <= accept) {
      push_edge(K2, D);
    } else {
      bs.anomalies.push_back({K2, D});
    }
  }

  if (k2_min < K0sq) bs.forbidden.emplace_back(k2_min, K0sq);
  for (std::size_t i = 0; i < bs.edges.size(); ++i) {
    const double lo = bs.edges[i].K2;
    const double hi = i + 1 < bs.edges.size() ? bs.edges[i + 1].K2 : k2_max;
    if (hi <= lo) continue;
    const Complex mid = hill_eval(hs, 0.5 * (lo + hi));
    if (std::abs(mid.real()) > 2.0 + accept) bs.forbidden.emplace_back(lo, hi);
  }
  return bs;
}

}  // namespace hillband

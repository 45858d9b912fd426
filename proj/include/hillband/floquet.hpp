#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hillband/hyp_oracle.hpp"
#include "hillband/model.hpp"
#include "hillband/numerics.hpp"
#include "hillband/spps.hpp"

namespace hillband {

/// Endpoint data of the normalized cell solutions: a11 = u1(Lambda),
/// a12 = u2(Lambda), a21 = u1'(Lambda), a22 = u2'(Lambda).
struct Monodromy {
  double K2 = 0.0;
  Problem which{};
  Complex a11, a12, a21, a22;

  Complex trace() const { return a11 + a22; }
  Complex determinant() const { return a11 * a22 - a12 * a21; }
};

Monodromy monodromy_f(const SppsBasis& basis, double K2);
/// b-entries of the Darboux partner problem; K^2 must satisfy |K^2| >= 1e-8.
Monodromy monodromy_g(const SppsBasis& basis, double K2);

/// Self-matching solutions F = u*y1 + v*y2 with F(x + Lambda) = r F(x).
/// Normally u = 1 and v = alpha; when a12 vanishes one of the pair is y2
/// itself (u = 0, v = 1) and its alpha is infinite.
struct SelfMatching {
  Complex alpha_plus, alpha_minus;
  Complex r_plus, r_minus;
  Complex u_plus{1.0}, v_plus;
  Complex u_minus{1.0}, v_minus;
  bool decoupled = false;
};

/// Below this |D^2 - 4| the two Bloch factors are treated as one.
inline constexpr double kDegeneracyFloor = 1e-10;

/// r+- = (D -+ sqrt(D^2 - 4))/2, each alpha paired with its r by evaluating
/// F(Lambda)/F(0). Throws DegenerateEdge when |D^2 - 4| < kDegeneracyFloor.
SelfMatching self_matching(const Monodromy& m);

/// D(K^2) as a power series in K^2 - K0^2, read off the basis at x = Lambda.
struct HillSeries {
  ModelParams params;
  PowerSeries series;
  PowerSeries slope;  // dD/dK^2
  TruncationBound bound;
};

HillSeries hill_series(const SppsBasis& basis);
/// Throws TruncationError outside the validated radius.
Complex hill_eval(const HillSeries& hs, double K2);
Complex hill_derivative(const HillSeries& hs, double K2);

/// Imaginary parts below this count as zero on the spectral axis.
inline constexpr double kImTolerance = 1e-8;

/// P = arccos(D/2)/Lambda. When D is real within im_tol the branch is fixed
/// so that Im P >= 0 and Re P lies in [0, k0]: P = i*acosh(D/2)/Lambda above
/// the band, (pi + i*acosh(-D/2))/Lambda below it.
Complex dispersion(const HillSeries& hs, double K2, double im_tol = kImTolerance);

/// Spectrum membership: |Re D| <= 2 and |Im D| <= im_tol.
bool in_band(Complex D, double im_tol = kImTolerance);

/// Normalized Darboux partner solutions g1, g2 with (g1, g2, g1', g2') =
/// (1, 0, 0, 1) at x = 0. Throws DegenerateTransform for |K^2| < 1e-8 and
/// SingularityError inside the pole exclusion.
CellSolution darboux_partner(const SppsBasis& basis, double K2, double x);
CellSolution darboux_partner_at_node(const SppsBasis& basis, double K2, std::size_t node);
/// Every node; nodes inside the pole exclusion are empty.
std::vector<std::optional<CellSolution>> darboux_partner(const SppsBasis& basis, double K2);

struct BlochValues {
  Complex plus;
  Complex minus;
};

/// Cell values of the self-matching pair at xi in [0, Lambda].
using CellPairFunction = std::function<BlochValues(double xi)>;

/// Cells further than this from the zeroth cell are refused.
inline constexpr int kMaxCellIndex = 64;

/// r+-^n times the cell values at x - n*Lambda, n = floor(x/Lambda).
/// Throws Range when |n| > kMaxCellIndex or r^n leaves the double range.
BlochValues bloch_extend(const SelfMatching& sm, const CellPairFunction& cell, double x,
                         double Lambda);

/// Self-matching pair of the f-problem and, when K^2 != 0, of the partner
/// problem, ready to be extended over several cells.
class BlochSolutions {
 public:
  BlochSolutions(const SppsBasis& basis, double K2);

  double K2() const noexcept { return K2_; }
  const SelfMatching& f_matching() const noexcept { return f_; }
  /// Empty when K^2 is too close to zero for the partner transform.
  const std::optional<SelfMatching>& g_matching() const noexcept { return g_; }

  BlochValues f(double x) const;
  /// Empty inside a pole exclusion or without a partner transform.
  std::optional<BlochValues> g(double x) const;

 private:
  const SppsBasis* basis_;
  double K2_;
  SelfMatching f_;
  std::optional<SelfMatching> g_;
};

struct BandEdge {
  double K2;
  EdgeParity parity;
  int index;
  Complex D;
  double deviation;  // ||D| - 2|
};

struct AnomalousExtremum {
  double K2;
  Complex D;
};

struct BandStructure {
  std::vector<BandEdge> edges;
  /// Closed K^2 intervals where |D| > 2, clipped to the window.
  std::vector<std::pair<double, double>> forbidden;
  double window_min = 0.0;
  double window_max = 0.0;
  std::vector<AnomalousExtremum> anomalies;
};

struct EdgeSearchOptions {
  double edge_tol = 1e-5;
  double root_tol = 1e-10;
  int probes = 4000;
};

/// Band edges in [k2_min, k2_max]: the seed edge at K0^2 plus every interior
/// extremum of Re D where |D| = 2 within 10*edge_tol. Extrema inside a band
/// are reported as anomalies. Requires k2_min <= K0^2 < k2_max.
BandStructure find_band_edges(const HillSeries& hs, double k2_min, double k2_max,
                              const EdgeSearchOptions& options = {});

}  // namespace hillband

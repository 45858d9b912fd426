#pragma once

#include <complex>

#include "hillband/model.hpp"

namespace hillband {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// log Gamma(z) on any branch; only exp() of it is meaningful. Lanczos with
/// reflection for Re z < 1/2.
Complex log_gamma(Complex z);
Complex gamma(Complex z);
/// 1/Gamma(z), exactly zero at the non-positive integers.
Complex rgamma(Complex z);
/// psi(z) = Gamma'(z)/Gamma(z); throws InvalidParameter at the poles.
Complex digamma(Complex z);

/// Gauss hypergeometric 2F1(a, b; c; z) on the closed unit disk.
///
/// The evaluation route is picked from the geometry of z:
///   * |1 - z| <= 1/2: connection formula around z = 1 (the logarithmic form
///     when c - a - b is an integer, which is always the case for the Bloch
///     solutions of this model);
///   * min(|z|, |z/(z-1)|) <= 0.85: direct series or the Pfaff transform
///     (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), whichever converges faster;
///   * otherwise (arcs around e^{+-i pi/3}, where every standard transform
///     has unit modulus) the hypergeometric ODE is re-expanded in Taylor
///     series from |z| = 1/2 out to z.
/// Terms are summed until |term| < 1e-16 |sum|, with a hard cap of 10^6.
/// Throws InvalidParameter for c in {0, -1, ...} or |z| > 1, and
/// NonConvergence when a series fails to settle.
Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z);

/// d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z).
Complex gauss_2f1_derivative(Complex a, Complex b, Complex c, Complex z);

// ---------------------------------------------------------------------------
// Closed-form solutions of the model
// ---------------------------------------------------------------------------

/// Characteristic exponents for the f-equation at (k0, s, K^2), principal
/// square-root branch (Re >= 0).
struct HypExponents {
  Complex p1;
  Complex q1;
};

HypExponents hyp_exponents(double K2, const ModelParams& p);

/// P_S(K^2) = sqrt((k0+s)^2 + K^2), principal branch.
Complex quasimomentum(double K2, const ModelParams& p);

/// Folds Re P into the reduced zone [0, k0] (steps of 2 k0, then mirror).
Complex reduce_to_brillouin_zone(Complex P, double k0);

/// Values and x-derivatives of the exact Bloch pair at one point. `first`
/// picks up e^{-i P Lambda} per cell, `second` e^{+i P Lambda}.
struct BlochPairExact {
  Complex first;
  Complex second;
  Complex first_prime;
  Complex second_prime;
};

/// Hypergeometric Bloch solutions f_{c,1}, f_{c,2} of the f-equation, with
/// the constant (-1)^{q1-1/2} evaluated as e^{i pi (q1 - 1/2)}. Throws
/// DegeneratePair when P_S/k0 is a non-negative integer (band edge).
BlochPairExact exact_f_solutions(double x, double K2, const ModelParams& p);

/// Darboux partners g_{c,j} = f_{c,j}' - Phi1 f_{c,j} in the explicit
/// two-term hypergeometric form; derivatives via g' = -K^2 f - Phi1 g.
BlochPairExact exact_g_solutions(double x, double K2, const ModelParams& p);

/// The periodic nodeless solution at K0^2 with its unimodular prefactor
/// dropped: 2F1(i sqrt(s/k0), -i sqrt(s/k0); 1; -e^{-2 i k0 x}).
Complex f0_bandedge(double x, const ModelParams& p);
Complex f0_bandedge_derivative(double x, const ModelParams& p);

enum class EdgeParity { periodic, antiperiodic };

const char* to_string(EdgeParity parity) noexcept;

/// Band-edge value of K^2 for index n: (2n k0)^2 - (k0+s)^2 for periodic
/// edges and ((2n+1) k0)^2 - (k0+s)^2 for antiperiodic ones.
double bandedge_K2(int n, EdgeParity parity, const ModelParams& p);

/// The single degenerate f-solution at the n-th periodic or antiperiodic edge.
Complex bandedge_exact_solution(int n, EdgeParity parity, double x, const ModelParams& p);

/// Exact pair recombined to the unit initial data at x = 0:
/// (u1, u2, u1', u2')(0) = (1, 0, 0, 1).
struct NormalizedSolutions {
  Complex u1;
  Complex u2;
  Complex u1_prime;
  Complex u2_prime;
};

/// The f-equation or its Darboux partner (g-equation).
enum class Problem { f, g };

/// Coefficients mapping an exact Bloch pair onto the normalized cell pair.
class NormalizedOracle {
 public:
  NormalizedOracle(Problem problem, double K2, const ModelParams& p);

  NormalizedSolutions at(double x) const;

 private:
  BlochPairExact pair_at(double x) const;

  Problem problem_;
  double K2_;
  ModelParams params_;
  // Row j holds the weights of (first, second) for normalized solution j.
  Complex w_[2][2];
};

}  // namespace hillband

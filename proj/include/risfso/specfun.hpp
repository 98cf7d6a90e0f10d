#pragma once

#include <complex>
#include <vector>

#include "risfso/errors.hpp"

namespace risfso::specfun {

// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLogGamma {
  double log_abs;
  int sign;  // +1 or -1
};

// Natural log of |Gamma(x)| for any non-pole real x, sign tracked
// separately. Throws EvaluationError at non-positive integers.
SignedLogGamma signed_ln_gamma(double x);

// Convenience wrapper returning log|Gamma(x)|.
double ln_gamma(double x);

// Principal-branch log-Gamma for complex arguments (Lanczos g=7).
// Branch offsets are irrelevant to callers that exponentiate sums.
std::complex<double> ln_gamma(std::complex<double> z);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

// Order spec for G^{m,n}_{p,q}[z | a; b] with positive real argument.
// The first n entries of `a` and the first m entries of `b` form the
// numerator groups of the Mellin-Barnes integrand.
struct MeijerGSpec {
  int m = 0;
  int n = 0;
  std::vector<double> a;  // size p
  std::vector<double> b;  // size q
  double z = 0.0;

  int p() const { return static_cast<int>(a.size()); }
  int q() const { return static_cast<int>(b.size()); }

  // Throws DomainError unless 0<=n<=p, 0<=m<=q, p<=q and z>0.
  void validate() const;
};

// Residue structure of the first m lower parameters.
struct PoleLayout {
  struct Pole {
    double location;     // b_j for j <= m
    bool residue_ready;  // simple pole, safe for the residue series
  };
  std::vector<Pole> poles;
  // Indices (0-based into b) whose locations differ by an integer within
  // tolerance. Groups are disjoint and cover 0..m-1; singletons included.
  std::vector<std::vector<int>> collision_groups;

  bool collision_free() const;
};

// Two lower parameters collide when their difference is within this
// tolerance of an integer; the residue series then has non-simple poles.
inline constexpr double kPoleCollisionTol = 1e-9;

// Perturbation applied to break pole collisions before the series runs.
inline constexpr double kPolePerturbation = 1e-5;

PoleLayout analyze_poles(const MeijerGSpec& spec);

// Residue-series evaluation (sum over poles of the Gamma(b_j - s)
// factors). Requires a collision-free layout. Throws EvaluationError when
// the layout collides, when p == q and z >= 1 (outside the series'
// convergence region), or when the series rejects itself (term budget
// exhausted or catastrophic cancellation detected).
double meijer_g_series(const MeijerGSpec& spec);

// Mellin-Barnes contour quadrature along a vertical line separating the
// two pole families. Independent of the series path. Throws
// EvaluationError when no separating line exists or the quadrature fails
// to settle.
double meijer_g_contour(const MeijerGSpec& spec);

// Dispatch: series when collision-free, perturbed-and-averaged series on
// collision, contour as the fallback when the series rejects.
double meijer_g(const MeijerGSpec& spec);

}  // namespace risfso::specfun

#pragma once

#include <vector>

#include "risfso/errors.hpp"
#include "risfso/random.hpp"
#include "risfso/specfun.hpp"

namespace risfso::channels {

// First hop: K sources, each backed by N phase-aligned reflecting
// elements, feeding the relay over Rayleigh channels. i.i.d. across
// sources, so one average SNR serves all of them.
struct RfHopParams {
  int sources = 1;        // K
  int elements = 1;       // N
  double avg_snr = 1.0;   // linear scale

  // Scale constant of the Gamma-family approximation for the coherently
  // combined element sum: 1 + (N-1) * Gamma(3/2)^2 = 1 + (N-1) * pi/4.
  // Exactly 1 when N == 1.
  double combining_constant() const;

  void validate() const;
};

// Second hop: Gamma-Gamma turbulence with pointing errors.
struct FsoHopParams {
  double alpha = 4.2;     // large-scale turbulence shape
  double beta = 1.4;      // small-scale turbulence shape
  double zeta_sq = 1.1;   // squared pointing-error ratio
  int detection = 1;      // 1 = heterodyne, 2 = IM/DD
  double avg_snr = 1.0;   // SNR scale parameter, linear

  // Smallest fading exponent; never stored, always derived.
  double nu() const;

  void validate() const;
};

// Coefficients c_s of x^s in (sum_{j=0}^{N-1} x^j / j!)^k. Collapses the
// k-fold nested ladder sums of the selection-CDF expansion into a single
// pass over s = 0 .. k(N-1).
struct DegreeWeights {
  int k = 0;
  std::vector<double> coeffs;
};

DegreeWeights degree_weights(int k, int elements);

// CDF of a single source's post-combining SNR (Gamma-family form).
double rf_single_cdf(double gamma, const RfHopParams& params);

// CDF of the selected (max) source SNR: single-source CDF to the K-th
// power.
double rf_selected_cdf(double gamma, const RfHopParams& params);

// Same quantity through the binomial expansion with DegreeWeights; kept
// as a second algebraic route for verification and for reuse by the
// closed-form error-rate analysis.
double rf_selected_cdf_expanded(double gamma, const RfHopParams& params);

// Draws the exact physical model: per source, N Rayleigh amplitudes
// added coherently, squared, scaled; returns the max over sources. The
// analytic CDF above is the Gamma approximation of this law.
double rf_sample(random::Stream& rng, const RfHopParams& params);

// Prefactors and parameter blocks of the FSO CDF's Meijer G form.
struct FsoCdfTerms {
  double log_a_prefactor;     // log of A
  double b_scale;             // B
  std::vector<double> chi1;   // r upper entries
  std::vector<double> chi2;   // 3r lower entries
};

FsoCdfTerms fso_cdf_terms(const FsoHopParams& params);

double fso_pdf(double gamma, const FsoHopParams& params);
double fso_cdf(double gamma, const FsoHopParams& params);

// SNR from the fade realization (ia, u): gamma_bar * (ia * u^{1/zeta^2})^r.
// Exposed so the transformation itself is testable.
double fso_snr_from_fades(double turbulence, double pointing_uniform,
                          const FsoHopParams& params);

// Draws gamma = gamma_bar * (Ia * U^{1/zeta^2})^r with Ia a product of
// two unit-mean Gamma variates. Realizes exactly the law behind fso_pdf.
double fso_sample(random::Stream& rng, const FsoHopParams& params);

}  // namespace risfso::channels

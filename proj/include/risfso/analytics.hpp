#pragma once

#include <functional>
#include <span>
#include <utility>

#include "risfso/channels.hpp"

namespace risfso::analytics {

// Conditional-error kernel constants: error probability given SNR g is
// a * Q(sqrt(2 b g)). BPSK is (1, 1).
struct Modulation {
  double a = 1.0;
  double b = 1.0;

  static Modulation bpsk() { return {1.0, 1.0}; }

  void validate() const;
};

struct SystemParams {
  channels::RfHopParams rf;
  channels::FsoHopParams fso;
  double outage_threshold = 1.0;  // linear SNR
  Modulation modulation;

  void validate() const;
};

// End-to-end CDF under min-combining of the two independent hops:
// F1 + F2 - F1*F2.
double e2e_cdf(double gamma, const SystemParams& params);

// Fully expanded single-expression form of the same CDF (binomial ladder
// times the FSO Meijer term); second algebraic route for verification.
double e2e_cdf_expanded(double gamma, const SystemParams& params);

double outage(const SystemParams& params);

// Closed-form average symbol error probability. Falls back to the
// quadrature route internally when the alternating source expansion loses
// too many digits.
double asep_closed(const SystemParams& params);

// Independent oracle: adaptive quadrature of the CDF-form error integral.
double asep_quadrature(const SystemParams& params);

// Quadrature of the same integral against an arbitrary CDF; exposed so
// degenerate stubs can drive the integrator in tests.
double asep_quadrature_with_cdf(const std::function<double(double)>& cdf,
                                const Modulation& mod);

enum class DominantHop { kRf, kFso, kTie };

// One power-law term of the high-SNR outage split:
// value(snr) = (gain * snr)^{-exponent}.
struct PowerTerm {
  double gain = 0.0;
  double exponent = 0.0;

  double at(double avg_snr) const;
};

struct AsymptoteReport {
  double diversity_order = 0.0;
  double coding_gain = 0.0;  // of the dominant term; NaN on a tie
  DominantHop dominant = DominantHop::kTie;
  double upsilon = 0.0;      // leading FSO CDF coefficient
  bool near_degenerate = false;
  PowerTerm rf_term;         // evaluate at the RF average SNR
  PowerTerm fso_term;        // evaluate at the FSO average SNR

  double total_at(double rf_avg_snr, double fso_avg_snr) const;
};

AsymptoteReport asymptote(const SystemParams& params);

// Least-squares diversity-order estimate from a probability-vs-SNR curve:
// negated slope of log10(P) against SNR_dB / 10. Needs >= 4 points with
// positive probabilities and strictly increasing SNRs.
double fit_diversity_slope(
    std::span<const std::pair<double, double>> curve_db_prob);

}  // namespace risfso::analytics

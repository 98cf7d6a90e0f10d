#include "risfso/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "risfso/quadrature.hpp"

namespace risfso::analytics {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / double(i);
  return v;
}

specfun::MeijerGSpec asep_meijer_spec(const channels::FsoCdfTerms& terms,
                                      int detection, double upper_shift,
                                      double z) {
  specfun::MeijerGSpec spec;
  spec.m = 3 * detection;
  spec.n = 2;
  spec.a.reserve(detection + 2);
  spec.a.push_back(upper_shift);
  spec.a.push_back(1.0);
  spec.a.insert(spec.a.end(), terms.chi1.begin(), terms.chi1.end());
  spec.b = terms.chi2;
  spec.b.push_back(0.0);
  spec.z = z;
  return spec;
}

struct SignedLog {
  double log_abs;
  int sign;
};

// log(Gamma(delta) - A G) through the ratio rho = A G / Gamma(delta),
// so the near-cancelling regime keeps its digits.
SignedLog bracket_signed_log(double log_gamma_delta, double log_a, double g) {
  if (g <= 0.0) {
    const double add = g == 0.0
                           ? 0.0
                           : std::exp(log_a + std::log(-g) - log_gamma_delta);
    return {log_gamma_delta + std::log1p(add), +1};
  }
  const double log_rho = log_a + std::log(g) - log_gamma_delta;
  if (log_rho < 0.0) {
    return {log_gamma_delta + std::log(-std::expm1(log_rho)), +1};
  }
  if (log_rho == 0.0) {
    return {-std::numeric_limits<double>::infinity(), +1};
  }
  return {log_gamma_delta + log_rho + std::log1p(-std::exp(-log_rho)), -1};
}

}  // namespace

void Modulation::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("modulation: a and b must be positive");
  }
}

void SystemParams::validate() const {
  rf.validate();
  fso.validate();
  modulation.validate();
  if (!(outage_threshold > 0.0)) {
    throw DomainError("outage_threshold: must be positive");
  }
}

double e2e_cdf(double gamma, const SystemParams& params) {
  params.validate();
  const double f1 = channels::rf_selected_cdf(gamma, params.rf);
  const double f2 = channels::fso_cdf(gamma, params.fso);
  return f1 + f2 - f1 * f2;
}

double e2e_cdf_expanded(double gamma, const SystemParams& params) {
  params.validate();
  if (gamma < 0.0) throw DomainError("e2e_cdf: gamma must be >= 0");
  const double f2 = channels::fso_cdf(gamma, params.fso);
  const double ladder = channels::rf_selected_cdf_expanded(gamma, params.rf);
  return std::clamp(ladder * (1.0 - f2) + f2, 0.0, 1.0);
}

double outage(const SystemParams& params) {
  return e2e_cdf(params.outage_threshold, params);
}

double asep_quadrature_with_cdf(const std::function<double(double)>& cdf,
                                const Modulation& mod) {
  mod.validate();
  // gamma = t^2 removes the integrable endpoint singularity:
  // ASEP = (a sqrt(b) / sqrt(pi)) * Int_0^inf e^{-b t^2} F(t^2) dt.
  const double upper = std::sqrt(50.0 / mod.b);
  const auto integrand = [&](double t) {
    return std::exp(-mod.b * t * t) * cdf(t * t);
  };
  const auto res = quadrature::integrate(integrand, 0.0, upper, 1e-11, 5e-10);
  return mod.a * std::sqrt(mod.b) / std::sqrt(kPi) * res.value;
}

double asep_quadrature(const SystemParams& params) {
  params.validate();
  return asep_quadrature_with_cdf(
      [&](double g) { return e2e_cdf(g, params); }, params.modulation);
}

double asep_closed(const SystemParams& params) {
  params.validate();
  const double a = params.modulation.a;
  const double b = params.modulation.b;
  const int big_k = params.rf.sources;
  const int elements = params.rf.elements;
  const double c_gur = params.rf.combining_constant() * params.rf.avg_snr;
  const double log_c_gur = std::log(c_gur);
  const channels::FsoCdfTerms terms = channels::fso_cdf_terms(params.fso);
  const int r = params.fso.detection;

  // The k = 0 binomial term and the trailing standalone Meijer term cancel
  // analytically to a/2; only the k >= 1 corrections are summed here.
  std::vector<double> log_terms;
  std::vector<int> signs;
  for (int k = 1; k <= big_k; ++k) {
    const channels::DegreeWeights w = channels::degree_weights(k, elements);
    const double pole_rate = double(k) / c_gur + b;
    const double log_pole_rate = std::log(pole_rate);
    const double z = terms.b_scale / (pole_rate * params.fso.avg_snr);
    const double log_binom = std::log(binomial(big_k, k));
    const int k_sign = (k % 2 == 0) ? +1 : -1;
    for (std::size_t s = 0; s < w.coeffs.size(); ++s) {
      const double delta = double(s) + 0.5;
      const double log_gamma_delta = specfun::ln_gamma(delta);
      const auto spec = asep_meijer_spec(terms, r, 0.5 - double(s), z);
      const double g = specfun::meijer_g(spec);
      const SignedLog bracket =
          bracket_signed_log(log_gamma_delta, terms.log_a_prefactor, g);
      const double log_term = log_binom + std::log(w.coeffs[s]) -
                              double(s) * log_c_gur -
                              delta * log_pole_rate + bracket.log_abs;
      log_terms.push_back(log_term);
      signs.push_back(k_sign * bracket.sign);
    }
  }

  const double prefactor = a * std::sqrt(b) / (2.0 * std::sqrt(kPi));
  double log_max = -std::numeric_limits<double>::infinity();
  for (double lt : log_terms) log_max = std::max(log_max, lt);
  double scaled_sum = 0.0;
  double scaled_abs_sum = 0.0;
  if (std::isfinite(log_max)) {
    for (std::size_t i = 0; i < log_terms.size(); ++i) {
      const double v = std::exp(log_terms[i] - log_max);
      scaled_sum += signs[i] * v;
      scaled_abs_sum += v;
    }
  } else {
    log_max = 0.0;
  }
  const double correction = prefactor * std::exp(log_max) * scaled_sum;
  const double result = 0.5 * a + correction;

  // Alternating binomial series shed digits as K grows; when the
  // cancellation estimate crosses 1e-8 relative, trust the quadrature
  // route instead.
  const double eps = std::numeric_limits<double>::epsilon();
  const double cancellation =
      eps * (prefactor * std::exp(log_max) * scaled_abs_sum + 0.5 * a);
  if (!(result > 0.0) || result > 0.5 * a * (1.0 + 1e-9) ||
      cancellation > 1e-8 * std::abs(result)) {
    return asep_quadrature(params);
  }
  return std::min(result, 0.5 * a);
}

double PowerTerm::at(double avg_snr) const {
  return std::pow(gain * avg_snr, -exponent);
}

double AsymptoteReport::total_at(double rf_avg_snr, double fso_avg_snr) const {
  return rf_term.at(rf_avg_snr) + fso_term.at(fso_avg_snr);
}

namespace {

// Leading coefficient of the FSO CDF's small-argument expansion, keeping
// only the dominant pole at nu/r. Near-degenerate pole spacing goes
// through the +-epsilon averaging policy.
double leading_fso_coefficient(const channels::FsoCdfTerms& terms,
                               double dominant, bool* near_degenerate) {
  std::vector<double> gaps;  // other-pole offsets from the dominant pole
  bool seen_self = false;
  double min_gap = std::numeric_limits<double>::infinity();
  for (double bj : terms.chi2) {
    const double gap = bj - dominant;
    if (!seen_self && gap == 0.0) {
      seen_self = true;
      continue;
    }
    gaps.push_back(gap);
    min_gap = std::min(min_gap, std::abs(gap));
  }
  *near_degenerate = min_gap < 1e-6;
  const auto coefficient = [&](double nudge) {
    double log_abs = specfun::ln_gamma(dominant) -
                     specfun::ln_gamma(1.0 + dominant);
    int sign = 1;
    for (double gap : gaps) {
      const auto g = specfun::signed_ln_gamma(
          std::abs(gap) < 1e-6 ? gap + nudge : gap);
      log_abs += g.log_abs;
      sign *= g.sign;
    }
    for (double chi : terms.chi1) {
      log_abs -= specfun::ln_gamma(chi - dominant);
    }
    return sign * std::exp(log_abs);
  };
  if (!*near_degenerate) return coefficient(0.0);
  return 0.5 * (coefficient(specfun::kPolePerturbation) +
                coefficient(-specfun::kPolePerturbation));
}

}  // namespace

AsymptoteReport asymptote(const SystemParams& params) {
  params.validate();
  AsymptoteReport report;
  const double rf_exponent =
      double(params.rf.sources) * double(params.rf.elements);
  const double r = double(params.fso.detection);
  const double fso_exponent = params.fso.nu() / r;

  const double n = double(params.rf.elements);
  const double factorial_root = std::exp(specfun::ln_gamma(n + 1.0) / n);
  const double rf_gain = params.rf.combining_constant() * factorial_root /
                         params.outage_threshold;

  const channels::FsoCdfTerms terms = channels::fso_cdf_terms(params.fso);
  const double leading =
      leading_fso_coefficient(terms, fso_exponent, &report.near_degenerate);
  // F2(g) ~ Upsilon (g / avg_snr)^{nu/r}: fold A and B^{nu/r} into the
  // pole coefficient.
  report.upsilon = std::exp(terms.log_a_prefactor +
                            fso_exponent * std::log(terms.b_scale)) *
                   leading;
  const double fso_gain =
      std::pow(report.upsilon, -1.0 / fso_exponent) / params.outage_threshold;

  report.rf_term = {rf_gain, rf_exponent};
  report.fso_term = {fso_gain, fso_exponent};
  report.diversity_order = std::min(rf_exponent, fso_exponent);
  if (rf_exponent < fso_exponent) {
    report.dominant = DominantHop::kRf;
    report.coding_gain = rf_gain;
  } else if (fso_exponent < rf_exponent) {
    report.dominant = DominantHop::kFso;
    report.coding_gain = fso_gain;
  } else {
    report.dominant = DominantHop::kTie;
    report.coding_gain = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double fit_diversity_slope(
    std::span<const std::pair<double, double>> curve_db_prob) {
  if (curve_db_prob.size() < 4) {
    throw DomainError("fit_diversity_slope: need at least 4 points");
  }
  double prev_db = -std::numeric_limits<double>::infinity();
  for (const auto& [snr_db, prob] : curve_db_prob) {
    if (!(prob > 0.0)) {
      throw DomainError("fit_diversity_slope: probabilities must be > 0");
    }
    if (!(snr_db > prev_db)) {
      throw DomainError("fit_diversity_slope: SNRs must be strictly increasing");
    }
    prev_db = snr_db;
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [snr_db, prob] : curve_db_prob) {
    mean_x += snr_db / 10.0;
    mean_y += std::log10(prob);
  }
  const double count = double(curve_db_prob.size());
  mean_x /= count;
  mean_y /= count;
  double cov = 0.0, var = 0.0;
  for (const auto& [snr_db, prob] : curve_db_prob) {
    const double dx = snr_db / 10.0 - mean_x;
    cov += dx * (std::log10(prob) - mean_y);
    var += dx * dx;
  }
  if (var == 0.0) throw DomainError("fit_diversity_slope: degenerate fit");
  return -cov / var;
}

}  // namespace risfso::analytics

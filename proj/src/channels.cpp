#include "risfso/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace risfso::channels {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / double(i);
  return v;
}

}  // namespace

double RfHopParams::combining_constant() const {
  return 1.0 + (elements - 1) * (kPi / 4.0);
}

void RfHopParams::validate() const {
  if (sources < 1) throw DomainError("rf.sources: must be >= 1");
  if (elements < 1) throw DomainError("rf.elements: must be >= 1");
  if (!(avg_snr > 0.0)) throw DomainError("rf.avg_snr: must be positive");
}

double FsoHopParams::nu() const { return std::min({alpha, beta, zeta_sq}); }

void FsoHopParams::validate() const {
  if (!(alpha > 0.0)) throw DomainError("fso.alpha: must be positive");
  if (!(beta > 0.0)) throw DomainError("fso.beta: must be positive");
  if (!(zeta_sq > 0.0)) throw DomainError("fso.zeta_sq: must be positive");
  if (detection != 1 && detection != 2) {
    throw DomainError("fso.detection: must be 1 (heterodyne) or 2 (IM/DD)");
  }
  if (!(avg_snr > 0.0)) throw DomainError("fso.avg_snr: must be positive");
}

DegreeWeights degree_weights(int k, int elements) {
  if (k < 0) throw DomainError("degree_weights: k must be >= 0");
  if (elements < 1) throw DomainError("degree_weights: elements must be >= 1");
  const int n = elements;
  std::vector<double> base(n);
  double fact = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) fact *= j;
    base[j] = 1.0 / fact;
  }
  std::vector<double> acc{1.0};  // k = 0: empty product
  for (int round = 0; round < k; ++round) {
    std::vector<double> next(acc.size() + n - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (int j = 0; j < n; ++j) next[i + j] += acc[i] * base[j];
    }
    acc = std::move(next);
  }
  return {k, std::move(acc)};
}

double rf_single_cdf(double gamma, const RfHopParams& params) {
  params.validate();
  if (gamma < 0.0) throw DomainError("rf_single_cdf: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  // 1 - e^{-x} sum_{i<N} x^i/i! is the regularized lower incomplete gamma
  // P(N, x); evaluating it that way avoids the 1-(1-eps) cancellation.
  const double x = gamma / (params.combining_constant() * params.avg_snr);
  return specfun::gamma_p(double(params.elements), x);
}

double rf_selected_cdf(double gamma, const RfHopParams& params) {
  return std::pow(rf_single_cdf(gamma, params), double(params.sources));
}

double rf_selected_cdf_expanded(double gamma, const RfHopParams& params) {
  params.validate();
  if (gamma < 0.0) throw DomainError("rf_selected_cdf: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  const double x = gamma / (params.combining_constant() * params.avg_snr);
  const double log_x = std::log(x);
  const int big_k = params.sources;
  // Per-term exponentials: e^{-kx} x^s can pair an underflow with an
  // overflow even though their product is tame.
  double total = 0.0;
  for (int k = 0; k <= big_k; ++k) {
    const DegreeWeights w = degree_weights(k, params.elements);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double scale = sign * binomial(big_k, k);
    for (std::size_t s = 0; s < w.coeffs.size(); ++s) {
      total += scale * w.coeffs[s] *
               std::exp(double(s) * log_x - double(k) * x);
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double rf_sample(random::Stream& rng, const RfHopParams& params) {
  double best = 0.0;
  for (int k = 0; k < params.sources; ++k) {
    double amplitude = 0.0;
    for (int i = 0; i < params.elements; ++i) {
      amplitude += rng.rayleigh_unit_power();
    }
    best = std::max(best, amplitude * amplitude);
  }
  return params.avg_snr * best;
}

FsoCdfTerms fso_cdf_terms(const FsoHopParams& params) {
  const double r = double(params.detection);
  FsoCdfTerms t;
  t.log_a_prefactor = (params.alpha + params.beta - 2.0) * std::log(r) +
                      std::log(params.zeta_sq) - (r - 1.0) * std::log(2.0 * kPi) -
                      specfun::ln_gamma(params.alpha) -
                      specfun::ln_gamma(params.beta);
  t.b_scale = std::pow(params.alpha * params.beta, r) / std::pow(r, 2.0 * r);
  const int ri = params.detection;
  for (int i = 1; i <= ri; ++i) t.chi1.push_back((params.zeta_sq + i) / r);
  for (int i = 1; i <= ri; ++i) t.chi2.push_back((params.zeta_sq + i - 1) / r);
  for (int i = 1; i <= ri; ++i) t.chi2.push_back((params.alpha + i - 1) / r);
  for (int i = 1; i <= ri; ++i) t.chi2.push_back((params.beta + i - 1) / r);
  return t;
}

double fso_pdf(double gamma, const FsoHopParams& params) {
  params.validate();
  if (!(gamma > 0.0)) throw DomainError("fso_pdf: gamma must be positive");
  const double r = double(params.detection);
  specfun::MeijerGSpec spec;
  spec.m = 3;
  spec.n = 0;
  spec.a = {params.zeta_sq + 1.0};
  spec.b = {params.zeta_sq, params.alpha, params.beta};
  spec.z = params.alpha * params.beta *
           std::pow(gamma / params.avg_snr, 1.0 / r);
  const double g = specfun::meijer_g(spec);
  const double scale = params.zeta_sq /
                       (r * gamma * std::exp(specfun::ln_gamma(params.alpha) +
                                             specfun::ln_gamma(params.beta)));
  const double value = scale * g;
  if (value < 0.0) {
    if (value < -1e-9) {
      throw EvaluationError("fso_pdf: negative density, evaluator failure");
    }
    return 0.0;
  }
  return value;
}

double fso_cdf(double gamma, const FsoHopParams& params) {
  params.validate();
  if (gamma < 0.0) throw DomainError("fso_cdf: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  const FsoCdfTerms t = fso_cdf_terms(params);
  const int r = params.detection;
  specfun::MeijerGSpec spec;
  spec.m = 3 * r;
  spec.n = 1;
  spec.a.reserve(r + 1);
  spec.a.push_back(1.0);
  spec.a.insert(spec.a.end(), t.chi1.begin(), t.chi1.end());
  spec.b = t.chi2;
  spec.b.push_back(0.0);
  spec.z = t.b_scale * gamma / params.avg_snr;
  const double value = std::exp(t.log_a_prefactor) * specfun::meijer_g(spec);
  // Values outside the unit interval by more than jitter mean the Meijer G
  // evaluation went wrong; surface that instead of clamping silently.
  if (value < -1e-9 || value > 1.0 + 1e-9) {
    throw EvaluationError("fso_cdf: value outside [0,1], evaluator failure");
  }
  return std::clamp(value, 0.0, 1.0);
}

double fso_snr_from_fades(double turbulence, double pointing_uniform,
                          const FsoHopParams& params) {
  const double fade = turbulence *
                      std::pow(pointing_uniform, 1.0 / params.zeta_sq);
  return params.avg_snr * std::pow(fade, double(params.detection));
}

double fso_sample(random::Stream& rng, const FsoHopParams& params) {
  const double turbulence = rng.gamma_unit_mean(params.alpha) *
                            rng.gamma_unit_mean(params.beta);
  return fso_snr_from_fades(turbulence, rng.uniform(), params);
}

}  // namespace risfso::channels

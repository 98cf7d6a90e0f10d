#include "risfso/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "risfso/quadrature.hpp"
#include "risfso/version.hpp"

namespace risfso::validate {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double ks_statistic(std::vector<double>& samples,
                    const std::function<double(double)>& cdf,
                    int grid_points) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const int grid = std::min<std::size_t>(grid_points, n);
  double worst = 0.0;
  for (int j = 1; j <= grid; ++j) {
    const std::size_t idx = std::max<std::size_t>(1, j * n / grid);
    const double f = cdf(samples[idx - 1]);
    const double hi = std::abs(f - double(idx) / double(n));
    const double lo = std::abs(f - double(idx - 1) / double(n));
    worst = std::max({worst, hi, lo});
  }
  return worst;
}

std::vector<specfun::MeijerGSpec> random_meijer_specs(std::uint64_t seed,
                                                      int count) {
  random::Stream rng(random::substream_seed(seed, 0x4d47));
  std::vector<specfun::MeijerGSpec> specs;
  specs.reserve(count);
  int guard = 0;
  while (static_cast<int>(specs.size()) < count) {
    if (++guard > count * 200) {
      throw EvaluationError("random_meijer_specs: rejection loop stuck");
    }
    channels::FsoHopParams fso;
    fso.alpha = 1.0 + 5.0 * rng.uniform();
    fso.beta = 1.0 + 5.0 * rng.uniform();
    fso.zeta_sq = 0.5 + 11.5 * rng.uniform();
    fso.detection = rng.uniform() < 0.5 ? 1 : 2;
    fso.avg_snr = 1.0;
    const double z = std::pow(10.0, -4.0 + 5.0 * rng.uniform());
    const auto terms = channels::fso_cdf_terms(fso);
    const int family = int(rng.uniform() * 3.0);
    specfun::MeijerGSpec spec;
    if (family == 0) {
      spec.m = 3;
      spec.n = 0;
      spec.a = {fso.zeta_sq + 1.0};
      spec.b = {fso.zeta_sq, fso.alpha, fso.beta};
    } else if (family == 1) {
      spec.m = 3 * fso.detection;
      spec.n = 1;
      spec.a = {1.0};
      spec.a.insert(spec.a.end(), terms.chi1.begin(), terms.chi1.end());
      spec.b = terms.chi2;
      spec.b.push_back(0.0);
    } else {
      spec.m = 3 * fso.detection;
      spec.n = 2;
      const int s = int(rng.uniform() * 5.0);
      spec.a = {0.5 - double(s), 1.0};
      spec.a.insert(spec.a.end(), terms.chi1.begin(), terms.chi1.end());
      spec.b = terms.chi2;
      spec.b.push_back(0.0);
    }
    // Error-rate kernels with one ladder gap per unit z shed digits for
    // large z; keep those draws inside the series' comfortable range.
    spec.z = (family == 2 && fso.detection == 1) ? std::min(z, 5.0) : z;
    if (!specfun::analyze_poles(spec).collision_free()) continue;
    try {
      (void)specfun::meijer_g_series(spec);
    } catch (const EvaluationError&) {
      continue;
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string ValidationReport::to_csv() const {
  std::ostringstream out;
  out << "# risfso validate " << kVersion << "\n";
  out << "check,metric,limit,pass,detail\n";
  for (const auto& c : checks) {
    out << c.name << "," << format_double(c.metric) << ","
        << format_double(c.limit) << "," << (c.pass ? "1" : "0") << ","
        << c.detail << "\n";
  }
  return out.str();
}

namespace {

CheckResult meijer_cross_oracle(const Options& options) {
  CheckResult check{"meijer_series_vs_contour", 0.0, 1e-7, false, ""};
  const auto specs = random_meijer_specs(options.seed, options.meijer_specs);
  for (const auto& spec : specs) {
    const double series = specfun::meijer_g_series(spec);
    const double contour = specfun::meijer_g_contour(spec);
    const double gap = std::abs(series - contour) /
                       std::max(std::abs(contour), 1e-300);
    check.metric = std::max(check.metric, gap);
  }
  check.detail = "max relative gap over " +
                 std::to_string(options.meijer_specs) + " random specs";
  check.pass = check.metric <= check.limit;
  return check;
}

double pdf_normalization_gap(const channels::FsoHopParams& fso) {
  // Log substitution handles both the algebraic origin and the
  // stretched-exponential tail.
  const auto integrand = [&](double x) {
    const double g = fso.avg_snr * std::exp(x);
    return channels::fso_pdf(g, fso) * g;
  };
  const auto res = quadrature::integrate(integrand, std::log(1e-30),
                                         std::log(2000.0), 1e-9, 1e-9);
  return std::abs(res.value - 1.0);
}

CheckResult pdf_normalization() {
  CheckResult check{"fso_pdf_normalization", 0.0, 1e-6, false, ""};
  const channels::FsoHopParams sets[] = {
      {4.2, 1.4, 1.1, 1, 10.0},
      {4.2, 1.4, 1.1, 2, 10.0},
      {3.0, 3.0, 1.5, 1, 10.0},  // alpha == beta collision
      {2.296, 1.822, 0.9, 2, 25.0},
  };
  for (const auto& fso : sets) {
    check.metric = std::max(check.metric, pdf_normalization_gap(fso));
  }
  check.detail = "max |integral - 1| over 4 parameter sets";
  check.pass = check.metric <= check.limit;
  return check;
}

CheckResult asep_cross_check() {
  CheckResult check{"asep_closed_vs_quadrature", 0.0, 1e-4, false, ""};
  const struct {
    int k, n, r;
    double snr_db;
  } cases[] = {{1, 1, 1, 10.0}, {2, 2, 1, 15.0}, {3, 2, 1, 8.0},
               {1, 3, 2, 12.0}, {2, 1, 2, 18.0}, {2, 4, 2, 10.0}};
  for (const auto& c : cases) {
    analytics::SystemParams params;
    params.rf = {c.k, c.n, sweep::db_to_linear(c.snr_db)};
    params.fso = {4.2, 1.4, 1.1, c.r, sweep::db_to_linear(c.snr_db)};
    params.outage_threshold = 2.0;
    params.modulation = analytics::Modulation::bpsk();
    const double closed = analytics::asep_closed(params);
    const double quad = analytics::asep_quadrature(params);
    const double gap = std::abs(closed - quad) / std::max(quad, 1e-300);
    check.metric = std::max(check.metric, gap);
  }
  check.detail = "max relative gap over 6 configurations";
  check.pass = check.metric <= check.limit;
  return check;
}

CheckResult fso_sampler_ks(const Options& options) {
  CheckResult check{"fso_sampler_ks", 0.0, 0.005, false, ""};
  channels::FsoHopParams fso{2.296, 1.822, 1.2, 2, 15.0};
  random::Stream rng(random::substream_seed(options.seed, 0xf50));
  std::vector<double> samples(200'000);
  for (auto& s : samples) s = channels::fso_sample(rng, fso);
  check.metric = ks_statistic(
      samples, [&](double g) { return channels::fso_cdf(g, fso); });
  check.detail = "KS distance at 200k samples";
  check.pass = check.metric <= check.limit;
  return check;
}

CheckResult rf_sampler_ks(const Options& options) {
  CheckResult check{"rf_sampler_ks_exact", 0.0, 0.005, false, ""};
  channels::RfHopParams rf{2, 1, 3.0};
  random::Stream rng(random::substream_seed(options.seed, 0x4f));
  std::vector<double> samples(200'000);
  for (auto& s : samples) s = channels::rf_sample(rng, rf);
  check.metric = ks_statistic(
      samples, [&](double g) { return channels::rf_selected_cdf(g, rf); });
  check.detail = "KS distance at 200k samples, N=1 exact case";
  check.pass = check.metric <= check.limit;
  return check;
}

CheckResult mc_outage_coverage(const Options& options) {
  CheckResult check{"mc_outage_covers_analytic", 0.0, 0.0, false, ""};
  analytics::SystemParams params;
  params.rf = {1, 1, sweep::db_to_linear(8.0)};
  params.fso = {4.2, 1.4, 1.1, 1, sweep::db_to_linear(12.0)};
  params.outage_threshold = 2.0;
  montecarlo::SimPlan plan{params, options.mc_trials, options.seed,
                           1u << 16, montecarlo::Combiner::kMin,
                           options.workers};
  const auto est = montecarlo::simulate_outage(plan);
  const double analytic = analytics::outage(params);
  check.metric = est.estimate;
  check.pass = est.ci_low <= analytic && analytic <= est.ci_high &&
               !est.low_count;
  check.detail = "analytic=" + format_double(analytic) +
                 " ci=[" + format_double(est.ci_low) + "," +
                 format_double(est.ci_high) + "]";
  return check;
}

CheckResult mc_sep_coverage(const Options& options) {
  CheckResult check{"mc_sep_covers_closed", 0.0, 0.0, false, ""};
  analytics::SystemParams params;
  params.rf = {2, 1, sweep::db_to_linear(10.0)};
  params.fso = {4.2, 1.4, 1.1, 1, sweep::db_to_linear(12.0)};
  params.outage_threshold = 2.0;
  params.modulation = analytics::Modulation::bpsk();
  montecarlo::SimPlan plan{params, options.mc_trials, options.seed,
                           1u << 16, montecarlo::Combiner::kMin,
                           options.workers};
  const auto est = montecarlo::simulate_sep(plan);
  const double closed = analytics::asep_closed(params);
  check.metric = est.estimate;
  check.pass = est.ci_low <= closed && closed <= est.ci_high && !est.low_count;
  check.detail = "closed=" + format_double(closed) + " ci=[" +
                 format_double(est.ci_low) + "," + format_double(est.ci_high) +
                 "]";
  return check;
}

CheckResult combiner_order(const Options& options) {
  CheckResult check{"harmonic_vs_min_outage", 0.0, 0.0, false, ""};
  double least = std::numeric_limits<double>::infinity();
  for (double snr_db : {8.0, 14.0}) {
    analytics::SystemParams params;
    params.rf = {2, 2, sweep::db_to_linear(snr_db)};
    params.fso = {4.2, 1.4, 1.1, 1, sweep::db_to_linear(snr_db)};
    params.outage_threshold = 2.0;
    montecarlo::SimPlan plan{params, std::max<std::uint64_t>(1, options.mc_trials / 4),
                             options.seed, 1u << 16,
                             montecarlo::Combiner::kMin, options.workers};
    const auto min_est = montecarlo::simulate_outage(plan);
    plan.combiner = montecarlo::Combiner::kHarmonic;
    const auto harm_est = montecarlo::simulate_outage(plan);
    least = std::min(least, harm_est.estimate - min_est.estimate);
  }
  // gamma1 gamma2 / (gamma1 + gamma2) <= min(gamma1, gamma2) pointwise,
  // so the harmonic combiner can only raise the outage count.
  check.metric = least;
  check.pass = least >= 0.0;
  check.detail = "min over configs of (harmonic - min) outage estimate";
  return check;
}

}  // namespace

ValidationReport run_validation(const Options& options) {
  ValidationReport report;
  report.checks.push_back(meijer_cross_oracle(options));
  report.checks.push_back(pdf_normalization());
  report.checks.push_back(asep_cross_check());
  report.checks.push_back(fso_sampler_ks(options));
  report.checks.push_back(rf_sampler_ks(options));
  report.checks.push_back(mc_outage_coverage(options));
  report.checks.push_back(mc_sep_coverage(options));
  report.checks.push_back(combiner_order(options));
  return report;
}

}  // namespace risfso::validate

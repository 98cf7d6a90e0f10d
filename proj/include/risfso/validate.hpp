#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "risfso/montecarlo.hpp"
#include "risfso/sweep.hpp"

namespace risfso::validate {

// Kolmogorov-Smirnov distance between a sample set and an analytic CDF,
// evaluated on empirical-quantile grid points (a tight lower bound on the
// exact statistic, cheap enough for expensive CDFs). Sorts in place.
double ks_statistic(std::vector<double>& samples,
                    const std::function<double(double)>& cdf,
                    int grid_points = 4096);

// Randomized Meijer G order specs drawn over the exercised families
// (PDF, CDF and error-rate kernels for both detection types), filtered so
// the residue series legitimately applies.
std::vector<specfun::MeijerGSpec> random_meijer_specs(std::uint64_t seed,
                                                      int count);

struct CheckResult {
  std::string name;
  double metric = 0.0;
  double limit = 0.0;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  // Deterministic serialization; identical across worker counts.
  std::string to_csv() const;
};

struct Options {
  std::uint64_t seed = 20240101;
  std::uint64_t mc_trials = 1'000'000;
  int workers = 0;
  int meijer_specs = 40;
};

// Cross-oracle consistency suites: series vs contour, closed forms vs
// quadrature, samplers vs CDFs, Monte Carlo vs analytics.
ValidationReport run_validation(const Options& options);

}  // namespace risfso::validate

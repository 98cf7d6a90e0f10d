#pragma once

#include <cstdint>

#include "risfso/analytics.hpp"

namespace risfso::montecarlo {

enum class Combiner { kMin, kHarmonic };

struct SimPlan {
  analytics::SystemParams params;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::uint32_t batch_size = 1u << 16;
  Combiner combiner = Combiner::kMin;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct EstimateWithCI {
  double estimate = 0.0;
  double ci_low = 0.0;   // 99% interval
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  double seconds = 0.0;
  // Fewer than 100 effective events behind the estimate; callers must
  // raise the trial count instead of accepting a vacuous pass.
  bool low_count = false;
};

// Fraction of trials with combined SNR at or below the outage threshold.
// Wilson 99% interval. Deterministic in (seed, trials, batch_size) for
// any worker count: substreams are bound to batch indices and the
// reduction is an order-independent integer count.
EstimateWithCI simulate_outage(const SimPlan& plan);

// Sample mean of a*Q(sqrt(2 b gamma_D)); normal 99% interval from the
// sample variance. Per-batch partial sums are reduced in batch order, so
// results are bit-identical across worker counts.
EstimateWithCI simulate_sep(const SimPlan& plan);

}  // namespace risfso::montecarlo

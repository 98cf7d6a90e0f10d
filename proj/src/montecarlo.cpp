#include "risfso/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

namespace risfso::montecarlo {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // Phi^{-1}(0.995)

void SimPlanCheck(const SimPlan& plan) {
  plan.params.validate();
  if (plan.trials < 1) throw DomainError("mc.trials: must be >= 1");
  if (plan.batch_size < 1) throw DomainError("mc.batch_size: must be >= 1");
  if (plan.workers < 0) throw DomainError("mc.workers: must be >= 0");
}

double combine(double g1, double g2, Combiner combiner) {
  if (combiner == Combiner::kMin) return std::min(g1, g2);
  return g1 * g2 / (g1 + g2);
}

struct BatchStats {
  std::uint64_t count = 0;  // outage events
  double sum = 0.0;         // SEP kernel sum
  double sum_sq = 0.0;
};

template <typename PerTrial>
std::vector<BatchStats> run_batches(const SimPlan& plan, PerTrial per_trial) {
  const std::uint64_t batches =
      (plan.trials + plan.batch_size - 1) / plan.batch_size;
  std::vector<BatchStats> stats(batches);
  std::atomic<std::uint64_t> next{0};
  int workers = plan.workers > 0
                    ? plan.workers
                    : std::max(1u, std::thread::hardware_concurrency());
  workers = int(std::min<std::uint64_t>(workers, batches));
  auto work = [&]() {
    for (;;) {
      const std::uint64_t index = next.fetch_add(1);
      if (index >= batches) return;
      const std::uint64_t begin = index * plan.batch_size;
      const std::uint64_t end =
          std::min<std::uint64_t>(begin + plan.batch_size, plan.trials);
      random::Stream rng(random::substream_seed(plan.seed, index));
      BatchStats local;
      for (std::uint64_t t = begin; t < end; ++t) {
        const double g1 = channels::rf_sample(rng, plan.params.rf);
        const double g2 = channels::fso_sample(rng, plan.params.fso);
        per_trial(combine(g1, g2, plan.combiner), local);
      }
      stats[index] = local;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return stats;
}

EstimateWithCI wilson_interval(std::uint64_t events, std::uint64_t trials) {
  EstimateWithCI out;
  out.trials = trials;
  const double n = double(trials);
  const double p_hat = double(events) / n;
  out.estimate = p_hat;
  const double z2 = kZ99 * kZ99;
  const double denom = 1.0 + z2 / n;
  const double center = (p_hat + z2 / (2.0 * n)) / denom;
  const double half =
      kZ99 * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
  out.ci_low = std::max(0.0, center - half);
  out.ci_high = std::min(1.0, center + half);
  out.low_count = p_hat * n < 100.0;
  return out;
}

}  // namespace

void SimPlan::validate() const { SimPlanCheck(*this); }

EstimateWithCI simulate_outage(const SimPlan& plan) {
  plan.validate();
  const auto start = std::chrono::steady_clock::now();
  const double threshold = plan.params.outage_threshold;
  auto stats = run_batches(plan, [&](double g, BatchStats& s) {
    if (g <= threshold) ++s.count;
  });
  std::uint64_t events = 0;
  for (const auto& s : stats) events += s.count;
  EstimateWithCI out = wilson_interval(events, plan.trials);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

EstimateWithCI simulate_sep(const SimPlan& plan) {
  plan.validate();
  const auto start = std::chrono::steady_clock::now();
  const double a = plan.params.modulation.a;
  const double b = plan.params.modulation.b;
  auto stats = run_batches(plan, [&](double g, BatchStats& s) {
    // a Q(sqrt(2 b g)) = a/2 erfc(sqrt(b g))
    const double kernel = 0.5 * a * std::erfc(std::sqrt(b * g));
    s.sum += kernel;
    s.sum_sq += kernel * kernel;
  });
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& s : stats) {  // fixed batch order keeps this bit-exact
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  EstimateWithCI out;
  out.trials = plan.trials;
  const double n = double(plan.trials);
  const double mean = sum / n;
  const double variance =
      plan.trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0))
                      : 0.0;
  const double half = kZ99 * std::sqrt(variance / n);
  out.estimate = mean;
  out.ci_low = std::max(0.0, mean - half);
  out.ci_high = mean + half;
  out.low_count = mean * n < 100.0 * (0.5 * a);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

}  // namespace risfso::montecarlo

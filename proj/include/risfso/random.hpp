#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace risfso::random {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for a counter-indexed substream. Substreams depend only on
// (seed, index), never on scheduling, so parallel runs stay reproducible.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

// Random stream with explicit, platform-independent variate generation.
// The std::*_distribution adapters are deliberately avoided: their output
// sequences are implementation-defined, which would break the bit-exact
// reproducibility contract of the Monte Carlo engine.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. One variate per call; the sibling is
  // discarded so consumption per call is fixed.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Rayleigh amplitude with E[a^2] = 1 (mean sqrt(pi)/2).
  double rayleigh_unit_power() { return std::sqrt(-std::log(uniform())); }

  // Gamma variate with the given shape and unit scale (Marsaglia-Tsang,
  // with the shape<1 boost).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Gamma variate normalized to unit mean.
  double gamma_unit_mean(double shape) { return gamma(shape) / shape; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace risfso::random

#pragma once

#include <cmath>
#include <functional>

#include "risfso/errors.hpp"

namespace risfso::quadrature {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7, K15) on a finite interval. Subdivides until
// the summed error estimate meets max(abs_tol, rel_tol * |integral|).
Result integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, double rel_tol, int max_intervals = 4000);

}  // namespace risfso::quadrature

#include "risfso/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

extern "C" double lgamma_r(double, int*);
extern "C" long double lgammal_r(long double, int*);

namespace risfso::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLnSqrt2Pi = 0.91893853320467274178;

bool near_nonpositive_integer(double x, double tol) {
  if (x > 0.5) return false;
  return std::abs(x - std::nearbyint(x)) < tol;
}

// Lanczos (g = 7, 9 terms), valid for Re(z) >= 0.5.
template <typename T>
T lanczos_ln_gamma(T z) {
  static constexpr double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= T(1.0);
  T x = T(kCoef[0]);
  for (int i = 1; i < 9; ++i) x += T(kCoef[i]) / (z + T(double(i)));
  const T t = z + T(7.5);
  return T(kLnSqrt2Pi) + (z + T(0.5)) * std::log(t) - t + std::log(x);
}

// log(sin(pi z)) without overflow for large |Im z|. Branch offsets are
// harmless to callers that exponentiate sums of these logs.
std::complex<double> log_sin_pi(std::complex<double> z) {
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  const std::complex<double> i_pi_z(-kPi * z.imag(), kPi * z.real());
  // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i), |e^{2 i pi z}| <= 1.
  const std::complex<double> expm = std::exp(2.0 * i_pi_z) - 1.0;
  return -i_pi_z + std::log(expm) - std::complex<double>(std::log(2.0), kPi / 2.0);
}

}  // namespace

SignedLogGamma signed_ln_gamma(double x) {
  if (near_nonpositive_integer(x, 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(x)))) {
    throw EvaluationError("ln_gamma: pole at non-positive integer x=" +
                          std::to_string(x));
  }
  int sign = 0;
  const double value = lgamma_r(x, &sign);
  return {value, sign};
}

double ln_gamma(double x) { return signed_ln_gamma(x).log_abs; }

std::complex<double> ln_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z).
    return std::log(kPi) - log_sin_pi(z) - lanczos_ln_gamma(1.0 - z);
  }
  return lanczos_ln_gamma(z);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_p: shape must be positive");
  if (x < 0.0) throw DomainError("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double log_prefactor = a * std::log(x) - x - ln_gamma(a);
  if (x < a + 1.0) {
    // Lower series.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) {
        return std::min(1.0, sum * std::exp(log_prefactor));
      }
    }
    throw EvaluationError("gamma_p: series failed to converge");
  }
  // Continued fraction for Q (modified Lentz).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return 1.0 - std::exp(log_prefactor) * h;
    }
  }
  throw EvaluationError("gamma_p: continued fraction failed to converge");
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

void MeijerGSpec::validate() const {
  if (m < 0 || n < 0 || n > p() || m > q() || p() > q()) {
    throw DomainError("MeijerGSpec: require 0<=n<=p, 0<=m<=q, p<=q");
  }
  if (!(z > 0.0)) throw DomainError("MeijerGSpec: argument must be positive");
  if (!std::isfinite(z)) throw DomainError("MeijerGSpec: argument must be finite");
}

bool PoleLayout::collision_free() const {
  for (const auto& g : collision_groups) {
    if (g.size() > 1) return false;
  }
  return true;
}

PoleLayout analyze_poles(const MeijerGSpec& spec) {
  spec.validate();
  PoleLayout layout;
  const int m = spec.m;
  // Union-find over the first m lower parameters.
  std::vector<int> parent(m);
  for (int i = 0; i < m; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = spec.b[i] - spec.b[j];
      if (std::abs(d - std::nearbyint(d)) < kPoleCollisionTol) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> groups(m);
  for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);
  for (auto& g : groups) {
    if (!g.empty()) layout.collision_groups.push_back(std::move(g));
  }
  layout.poles.reserve(m);
  for (int h = 0; h < m; ++h) {
    bool simple = true;
    for (const auto& g : layout.collision_groups) {
      if (g.size() > 1 && std::find(g.begin(), g.end(), h) != g.end()) {
        simple = false;
      }
    }
    // A numerator Gamma(1 + b_h - a_j + l) pole at some l >= 0 means the
    // residue coefficients themselves blow up.
    for (int j = 0; j < spec.n; ++j) {
      const double d = spec.a[j] - spec.b[h];
      if (d >= 1.0 - kPoleCollisionTol &&
          std::abs(d - std::nearbyint(d)) < kPoleCollisionTol) {
        simple = false;
      }
    }
    layout.poles.push_back({spec.b[h], simple});
  }
  return layout;
}

namespace {

constexpr int kMaxTermsPerPole = 500;
constexpr double kTermRelFloor = 1e-16;
// Reject the series when the total is this much smaller than the largest
// term: the surviving digits no longer meet the cross-oracle tolerance.
constexpr double kCancellationGuard = 1e-8;

// Terms and the accumulator run in extended precision; the alternating
// ladders would otherwise cap the identity suite around 1e-11.
struct CompensatedSumL {
  long double sum = 0.0L;
  long double comp = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  long double value() const { return sum + comp; }
};

struct PoleSeriesFactors {
  // Linear-factor offsets for pole h: numerators Gamma(d_j - l),
  // Gamma(e_j + l); denominators Gamma(f_j + l), Gamma(g_j - l).
  std::vector<double> d, e, f, g;
  double b_h = 0.0;
};

PoleSeriesFactors pole_factors(const MeijerGSpec& spec, int h) {
  PoleSeriesFactors out;
  out.b_h = spec.b[h];
  for (int j = 0; j < spec.m; ++j) {
    if (j != h) out.d.push_back(spec.b[j] - spec.b[h]);
  }
  for (int j = 0; j < spec.n; ++j) out.e.push_back(1.0 + spec.b[h] - spec.a[j]);
  for (int j = spec.m; j < spec.q(); ++j) {
    out.f.push_back(1.0 + spec.b[h] - spec.b[j]);
  }
  for (int j = spec.n; j < spec.p(); ++j) out.g.push_back(spec.a[j] - spec.b[h]);
  return out;
}

enum class TermState { kValue, kZeroTransient, kZeroPermanent };

// Fresh evaluation of term l through extended-precision log-gamma sums;
// used at l = 0 and to restart after a vanished term.
TermState fresh_term(const PoleSeriesFactors& fac, int l, long double log_z,
                     long double* term) {
  long double log_abs = (static_cast<long double>(fac.b_h) + l) * log_z -
                        std::lgamma(static_cast<long double>(l) + 1.0L);
  int sign = (l % 2 == 0) ? 1 : -1;
  TermState state = TermState::kValue;
  const auto accumulate = [&](double arg, int direction) {
    int s = 0;
    const long double lg = lgammal_r(static_cast<long double>(arg), &s);
    log_abs += direction * lg;
    sign *= s;
  };
  for (double dj : fac.d) {
    const double arg = dj - l;
    if (near_nonpositive_integer(arg, kPoleCollisionTol)) {
      throw EvaluationError("meijer_g_series: non-simple pole ladder");
    }
    accumulate(arg, +1);
  }
  for (double ej : fac.e) {
    const double arg = ej + l;
    if (near_nonpositive_integer(arg, kPoleCollisionTol)) {
      throw EvaluationError("meijer_g_series: numerator gamma pole");
    }
    accumulate(arg, +1);
  }
  for (double fj : fac.f) {
    const double arg = fj + l;
    if (near_nonpositive_integer(arg, kPoleCollisionTol)) {
      state = TermState::kZeroTransient;  // pole clears as l grows
    }
  }
  for (double gj : fac.g) {
    const double arg = gj - l;
    if (near_nonpositive_integer(arg, kPoleCollisionTol)) {
      state = TermState::kZeroPermanent;  // stays a pole for all larger l
    }
  }
  if (state != TermState::kValue) {
    *term = 0.0L;
    return state;
  }
  for (double fj : fac.f) accumulate(fj + l, -1);
  for (double gj : fac.g) accumulate(gj - l, -1);
  if (log_abs > 11000.0L) {
    throw EvaluationError("meijer_g_series: term overflow");
  }
  *term = sign * std::exp(log_abs);
  return TermState::kValue;
}

// Ratio term(l) / term(l-1); valid only when term(l-1) is nonzero and no
// factor crosses a pole, which the caller guarantees.
long double term_ratio(const PoleSeriesFactors& fac, int l, long double z) {
  long double ratio = -z / static_cast<long double>(l);
  for (double ej : fac.e) ratio *= static_cast<long double>(ej) + (l - 1);
  for (double gj : fac.g) ratio *= static_cast<long double>(gj) - l;
  for (double dj : fac.d) ratio /= static_cast<long double>(dj) - l;
  for (double fj : fac.f) ratio /= static_cast<long double>(fj) + (l - 1);
  return ratio;
}

bool ratio_crosses_pole(const PoleSeriesFactors& fac, int l) {
  for (double gj : fac.g) {
    if (near_nonpositive_integer(gj - l, kPoleCollisionTol)) return true;
  }
  for (double fj : fac.f) {
    if (near_nonpositive_integer(fj + l, kPoleCollisionTol)) return true;
  }
  return false;
}

}  // namespace

double meijer_g_series(const MeijerGSpec& spec) {
  spec.validate();
  if (spec.p() == spec.q() && spec.z >= 1.0) {
    throw EvaluationError(
        "meijer_g_series: z outside convergence region for p == q");
  }
  const PoleLayout layout = analyze_poles(spec);
  if (!layout.collision_free()) {
    throw EvaluationError(
        "meijer_g_series: pole collision, caller must perturb");
  }
  for (const auto& pole : layout.poles) {
    if (!pole.residue_ready) {
      throw EvaluationError("meijer_g_series: degenerate residue structure");
    }
  }

  const long double log_z = std::log(static_cast<long double>(spec.z));
  const long double z = static_cast<long double>(spec.z);
  CompensatedSumL total;
  long double max_abs_term = 0.0L;

  // The term-ratio magnitude behaves like z / l^{q-p}, so terms can keep
  // growing until l ~ z^{1/(q-p)}; stopping is only allowed past that
  // hump (early dips would otherwise fake convergence).
  int l_hump = 0;
  if (spec.q() > spec.p()) {
    l_hump = static_cast<int>(
        std::ceil(std::pow(spec.z, 1.0 / double(spec.q() - spec.p()))));
    l_hump = std::min(l_hump, kMaxTermsPerPole - 2);
  }

  for (int h = 0; h < spec.m; ++h) {
    const PoleSeriesFactors fac = pole_factors(spec, h);
    // Terms killed by a rising lower-denominator Gamma(f_j + l) reappear
    // once l clears the pole ladder; do not stop before that point.
    int l_free = l_hump;
    for (double fj : fac.f) {
      if (fj < 1.0) l_free = std::max(l_free, int(std::ceil(-fj)) + 2);
    }
    int consecutive_small = 0;
    long double prev_abs = std::numeric_limits<long double>::infinity();
    long double term = 0.0L;
    bool have_term = false;
    bool done = false;
    for (int l = 0; !done; ++l) {
      if (l >= kMaxTermsPerPole) {
        throw EvaluationError("meijer_g_series: term budget exhausted");
      }
      if (!have_term || ratio_crosses_pole(fac, l)) {
        const TermState state = fresh_term(fac, l, log_z, &term);
        if (state == TermState::kZeroPermanent) break;
        have_term = state == TermState::kValue;
      } else {
        term *= term_ratio(fac, l, z);
      }
      const long double abs_term = std::abs(term);
      if (abs_term > 0.0L) {
        total.add(term);
        max_abs_term = std::max(max_abs_term, abs_term);
      }
      const long double scale =
          std::max(std::abs(total.value()),
                   static_cast<long double>(std::numeric_limits<double>::min()));
      if (l >= l_free && abs_term <= kTermRelFloor * scale &&
          abs_term <= prev_abs) {
        if (++consecutive_small >= 2) done = true;
      } else {
        consecutive_small = 0;
      }
      prev_abs = abs_term;
    }
  }

  const long double value = total.value();
  if (max_abs_term > 0.0L &&
      std::abs(value) < kCancellationGuard * max_abs_term) {
    throw EvaluationError("meijer_g_series: catastrophic cancellation");
  }
  const double out = static_cast<double>(value);
  if (!std::isfinite(out)) {
    throw EvaluationError("meijer_g_series: result exceeds double range");
  }
  return out;
}

namespace {

// Log of the Mellin-Barnes integrand (without z^s) at s.
std::complex<double> contour_log_kernel(const MeijerGSpec& spec,
                                        std::complex<double> s) {
  std::complex<double> acc(0.0, 0.0);
  for (int j = 0; j < spec.m; ++j) acc += ln_gamma(spec.b[j] - s);
  for (int j = 0; j < spec.n; ++j) acc += ln_gamma(1.0 - spec.a[j] + s);
  for (int j = spec.m; j < spec.q(); ++j) acc -= ln_gamma(1.0 - spec.b[j] + s);
  for (int j = spec.n; j < spec.p(); ++j) acc -= ln_gamma(spec.a[j] - s);
  return acc;
}

}  // namespace

double meijer_g_contour(const MeijerGSpec& spec) {
  spec.validate();
  if (spec.m < 1) {
    throw EvaluationError("meijer_g_contour: m >= 1 required");
  }
  double right_min = spec.b[0];
  for (int j = 1; j < spec.m; ++j) right_min = std::min(right_min, spec.b[j]);
  double left_max = right_min - 1.0;
  if (spec.n > 0) {
    left_max = spec.a[0] - 1.0;
    for (int j = 1; j < spec.n; ++j) left_max = std::max(left_max, spec.a[j] - 1.0);
  }
  if (!(right_min - left_max > 1e-8)) {
    throw EvaluationError(
        "meijer_g_contour: pole families interleave, no separating line");
  }
  const double c = 0.5 * (left_max + right_min);
  const double log_z = std::log(spec.z);

  auto integrand = [&](double t) -> double {
    const std::complex<double> s(c, t);
    const std::complex<double> ln_f = contour_log_kernel(spec, s) + s * log_z;
    return std::exp(ln_f).real();
  };
  auto log_magnitude = [&](double t) -> double {
    const std::complex<double> s(c, t);
    return contour_log_kernel(spec, s).real() + c * log_z;
  };

  // Truncate where the integrand has fallen ~1e-19 below its peak.
  double peak_log = log_magnitude(0.0);
  double height = 4.0;
  for (;;) {
    const double lm = log_magnitude(height);
    peak_log = std::max(peak_log, lm);
    if (lm < peak_log - 45.0) break;
    height *= 1.5;
    if (height > 4096.0) {
      throw EvaluationError(
          "meijer_g_contour: integrand does not decay on this contour");
    }
  }

  // Full-line trapezoid with step halving; conjugate symmetry folds the
  // line onto [0, T]. Converges geometrically for these kernels.
  double h = std::min(0.25, 2.0 * kPi / (16.0 * (1.0 + std::abs(log_z))));
  double accum = integrand(0.0);
  {
    long k = 1;
    for (;;) {
      const double t = h * double(k);
      if (t > height) break;
      accum += 2.0 * integrand(t);
      ++k;
    }
  }
  double value = h * accum;
  // Cancellation inside the oscillatory sum caps the reachable absolute
  // accuracy at roughly eps * peak; don't demand more than that.
  const double attainable = 3e-15 * std::exp(peak_log) * std::max(1.0, height);
  int settled = 0;
  for (int level = 0; level < 14; ++level) {
    const double h2 = 0.5 * h;
    double odd = 0.0;
    long k = 1;
    for (;;) {
      const double t = h2 * double(k);
      if (t > height) break;
      odd += 2.0 * integrand(t);
      k += 2;
    }
    const double refined = 0.5 * value + h2 * odd;
    const double diff = std::abs(refined - value);
    value = refined;
    h = h2;
    if (diff <= std::max(5e-13 * std::abs(refined), attainable)) {
      if (++settled >= 2) break;
    } else {
      settled = 0;
    }
  }
  if (settled < 2) {
    throw EvaluationError("meijer_g_contour: quadrature failed to settle");
  }
  return value / (2.0 * kPi);
}

namespace {

// Leading exponential asymptote of G^{q,0}_{p,q} for large argument:
// (2 pi)^{(s-1)/2} s^{-1/2} z^theta exp(-s z^{1/s}) with s = q - p and
// theta = (sum b - sum a + (1 - s)/2) / s. Used only where the value has
// decayed past any cancellation-limited evaluator.
bool tail_regime(const MeijerGSpec& spec) {
  if (spec.n != 0 || spec.m != spec.q() || spec.p() >= spec.q()) return false;
  const double sigma = spec.q() - spec.p();
  return sigma * std::pow(spec.z, 1.0 / sigma) >= 35.0;
}

double meijer_g_exponential_tail(const MeijerGSpec& spec) {
  const double sigma = spec.q() - spec.p();
  double param_sum = 0.0;
  for (double bj : spec.b) param_sum += bj;
  for (double aj : spec.a) param_sum -= aj;
  const double theta = (param_sum + 0.5 * (1.0 - sigma)) / sigma;
  const double log_value = 0.5 * (sigma - 1.0) * std::log(2.0 * kPi) -
                           0.5 * std::log(sigma) + theta * std::log(spec.z) -
                           sigma * std::pow(spec.z, 1.0 / sigma);
  return std::exp(log_value);
}

MeijerGSpec perturbed_spec(const MeijerGSpec& spec, const PoleLayout& layout,
                           double direction) {
  MeijerGSpec out = spec;
  for (const auto& group : layout.collision_groups) {
    if (group.size() < 2) continue;
    std::vector<int> members = group;
    std::sort(members.begin(), members.end());
    for (std::size_t i = 1; i < members.size(); ++i) {
      out.b[members[i]] += direction * double(i) * kPolePerturbation;
    }
  }
  return out;
}

}  // namespace

double meijer_g(const MeijerGSpec& spec) {
  spec.validate();
  const PoleLayout layout = analyze_poles(spec);
  if (layout.collision_free()) {
    try {
      return meijer_g_series(spec);
    } catch (const EvaluationError&) {
      // fall through to the asymptote or contour
    }
  } else {
    // Collision: average evaluations perturbed in both directions; the
    // first-order perturbation error cancels in the mean.
    try {
      const double plus = meijer_g_series(perturbed_spec(spec, layout, +1.0));
      const double minus = meijer_g_series(perturbed_spec(spec, layout, -1.0));
      return 0.5 * (plus + minus);
    } catch (const EvaluationError&) {
      // fall through to the asymptote or contour
    }
  }
  // Deep exponential tails sit below the contour's cancellation floor;
  // the closed asymptote is the accurate route there.
  if (tail_regime(spec)) return meijer_g_exponential_tail(spec);
  try {
    return meijer_g_contour(spec);
  } catch (const EvaluationError& e) {
    throw EvaluationError(std::string("meijer_g: series rejected and "
                                      "contour fallback failed: ") +
                          e.what());
  }
}

}  // namespace risfso::specfun

#include "cuspeig/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cuspeig/errors.hpp"
#include "cuspeig/quadrature.hpp"

namespace cuspeig {
namespace {

constexpr double kSpectrumStep = 1.0 / 64.0;
constexpr double kSpectrumCutoff = 64.0;
constexpr int kTailExponent = 8;
constexpr double kWindowLo = 1.0 / 6.0;  // A is the min of f1 over this window
constexpr double kWindowHi = 1.0 / 3.0;
constexpr double kRefineStep = 1e-4;     // off-grid refinement for A
constexpr double kNonnegTol = 1e-12;     // allowed dip of h1 below zero
constexpr double kMonotoneTol = 1e-10;   // allowed positive slope of h1
constexpr double kRoundTripTol = 1e-9;   // relative to the peak of f1
constexpr double kOracleTol = 1e-12;     // stored vs double-resolution spectrum
constexpr double kIdentityTol = 1e-9;    // transform of f vs integrated profile

double bump(double y, double w) {
  const double t = y / w;
  const double d = 1.0 - t * t;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d);
}

double bump_deriv(double y, double w) {
  const double t = y / w;
  const double d = 1.0 - t * t;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d) * (-2.0 * t / (d * d)) / w;
}

// 200 points resolve the autocorrelation integrands to machine accuracy; 512
// points resolve the bump transform up to the frequencies the spectral
// profile integral needs (phase t*w/2 <= 192 across the support).
const GaussLegendreRule& window_rule() {
  static const GaussLegendreRule rule = gauss_legendre(200);
  return rule;
}

const GaussLegendreRule& transform_rule() {
  static const GaussLegendreRule rule = gauss_legendre(512);
  return rule;
}

// (phi' * phi)(x) over the support overlap, for x >= 0.
double autocorr_deriv(double x, double w) {
  const double a = x - w;
  const double b = w;
  if (!(b > a)) return 0.0;
  const GaussLegendreRule& rule = window_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = mid + half * rule.nodes[i];
    sum += rule.weights[i] * bump_deriv(y, w) * bump(x - y, w);
  }
  return half * sum;
}

// The window before squaring: f(x) = -(phi*phi)'(x)/x for x != 0, and the
// cancellation-free limit f(0) = ∫ phi'(y)^2 dy.
double window_raw(double x, double w) {
  x = std::fabs(x);
  if (x >= 2.0 * w) return 0.0;
  if (x == 0.0) {
    const GaussLegendreRule& rule = window_rule();
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double d = bump_deriv(w * rule.nodes[i], w);
      sum += rule.weights[i] * d * d;
    }
    return w * sum;
  }
  return -autocorr_deriv(x, w) / x;
}

// Transform of the bump: phi_hat(t) = 2 ∫_0^w phi(y) cos(ty) dy.
double bump_transform(double t, double w) {
  const GaussLegendreRule& rule = transform_rule();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = 0.5 * w * (rule.nodes[i] + 1.0);
    sum += rule.weights[i] * bump(y, w) * std::cos(t * y);
  }
  return w * sum;
}

// Trapezoid cosine transform of an even grid given by its half samples
// h[0..m] with spacing dx:  dx * (h[0] + 2 Σ_k h[k] cos(r k dx)).
// Since the underlying function is supported in [-1, 1] and smooth, this
// equals the continuous transform up to spectral aliases beyond 2*pi/dx
// (Poisson summation), i.e. at machine accuracy for the steps used here.
double cosine_transform_sum(const std::vector<double>& half, double dx,
                            double r) {
  double acc = half[0];
  for (std::size_t k = 1; k < half.size(); ++k) {
    acc += 2.0 * half[k] * std::cos(r * (static_cast<double>(k) * dx));
  }
  return dx * acc;
}

[[noreturn]] void fail_check(const char* what, double value, double where) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "build_f1: %s (value %.17g at %.17g)", what,
                value, where);
  throw PrecisionError(buf);
}

// Monotone (Fritsch-Carlson) cubic Hermite interpolation on a uniform grid,
// indexed by pos = r / step.  Preserves the monotonicity of the samples,
// which the h1 evaluator relies on for the domination h_T(r) <= T*h1(r).
double pchip_eval(const std::vector<double>& v, double pos) {
  const std::size_t n = v.size();
  if (pos <= 0.0) return v.front();
  if (pos >= static_cast<double>(n - 1)) return v.back();
  const std::size_t j = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(j);
  if (t == 0.0) return v[j];
  // Limited slope at node k, in units of value per index.
  auto slope = [&](std::size_t k) -> double {
    if (k == 0) {
      const double dr = v[1] - v[0];
      const double m = 1.5 * dr - 0.5 * (v[2] - v[1]);
      if (m * dr <= 0.0) return 0.0;
      if (std::fabs(m) > 3.0 * std::fabs(dr)) return 3.0 * dr;
      return m;
    }
    if (k + 1 == n) {
      const double dl = v[k] - v[k - 1];
      const double m = 1.5 * dl - 0.5 * (v[k - 1] - v[k - 2]);
      if (m * dl <= 0.0) return 0.0;
      if (std::fabs(m) > 3.0 * std::fabs(dl)) return 3.0 * dl;
      return m;
    }
    const double dl = v[k] - v[k - 1];
    const double dr = v[k + 1] - v[k];
    if (dl * dr <= 0.0) return 0.0;
    return 2.0 * dl * dr / (dl + dr);  // harmonic mean, uniform spacing
  };
  const double m0 = slope(j);
  const double m1 = slope(j + 1);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * v[j] + h10 * m0 + h01 * v[j + 1] + h11 * m1;
}

// Lagrange cubic through v[0..3] placed at local abscissae -1,0,1,2,
// evaluated at t in [0,1] (between v[1] and v[2]).  Exact at t = 0 and 1.
double cubic4(const double* v, double t) {
  const double a = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double b = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double c = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double d = (t + 1.0) * t * (t - 1.0) / 6.0;
  return a * v[0] + b * v[1] + c * v[2] + d * v[3];
}

}  // namespace

double TestFunctionPair::tail_model(double r) const {
  return tail_coefficient / std::pow(1.0 + std::fabs(r), tail_exponent);
}

double TestFunctionPair::f1(double x) const {
  x = std::fabs(x);
  if (x >= 1.0) return 0.0;
  const std::size_t mid = grid.size() / 2;
  const double pos = x / grid_step;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j >= mid) j = mid - 1;
  // 4-point stencil around the cell [j, j+1] of the positive half; the index
  // mid + j - 1 is valid because grid[mid - 1] mirrors grid[mid + 1], and the
  // stencil shifts left at the support edge (the cubic stays exact at nodes).
  std::size_t base = mid + j - 1;
  if (base + 3 >= grid.size()) base = grid.size() - 4;
  const double t =
      pos - (static_cast<double>(base) - static_cast<double>(mid)) - 1.0;
  const double val = cubic4(&grid[base], t);
  return val > 0.0 ? val : 0.0;
}

double TestFunctionPair::h1(double r) const {
  r = std::fabs(r);
  if (r > spectrum_cutoff) {
    return std::min(tail_model(r), spectrum.back());
  }
  return pchip_eval(spectrum, r / spectrum_step);
}

double ScaledTestFunction::f(double x) const { return base.f1(x / T); }

double ScaledTestFunction::h(double r) const { return T * base.h1(T * r); }

TestFunctionPair build_f1(double bump_width, double grid_step) {
  if (!std::isfinite(bump_width) || bump_width <= kWindowLo ||
      bump_width > 0.5) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "build_f1: bump width must lie in (1/6, 1/2] so the squared "
                  "window stays inside [-1,1] and is positive on [1/6,1/3]; "
                  "got %.17g",
                  bump_width);
    throw std::invalid_argument(buf);
  }
  if (!std::isfinite(grid_step) || !(grid_step > 0.0)) {
    throw std::invalid_argument("build_f1: grid step must be positive");
  }
  const double inv = 1.0 / grid_step;
  const long long m_ll = std::llround(inv);
  if (std::fabs(inv - static_cast<double>(m_ll)) > 1e-9 * inv || m_ll < 16 ||
      m_ll > (1LL << 20)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "build_f1: grid step must evenly divide 1 with between 16 "
                  "and 2^20 intervals per unit; got %.17g",
                  grid_step);
    throw std::invalid_argument(buf);
  }

  const double w = bump_width;
  const double dx = grid_step;
  const std::size_t m = static_cast<std::size_t>(m_ll);

  // Raw window f on the positive half-grid.
  std::vector<double> raw(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    raw[k] = window_raw(static_cast<double>(k) * dx, w);
  }

  // Normalise so that ∫ f1 = 1 (trapezoid; the endpoints vanish).
  double braw_acc = raw[0] * raw[0];
  for (std::size_t k = 1; k <= m; ++k) braw_acc += 2.0 * raw[k] * raw[k];
  const double b_raw = dx * braw_acc;
  if (!(b_raw > 0.0)) fail_check("window integral is not positive", b_raw, 0.0);

  std::vector<double> half(m + 1);
  for (std::size_t k = 0; k <= m; ++k) half[k] = raw[k] * raw[k] / b_raw;

  TestFunctionPair tf;
  tf.bump_width = w;
  tf.grid_step = dx;
  tf.grid.assign(2 * m + 1, 0.0);
  for (std::size_t k = 0; k <= m; ++k) {
    tf.grid[m + k] = half[k];
    tf.grid[m - k] = half[k];
  }

  // Support and sign are exact by construction; verify anyway.
  for (std::size_t k = 0; k <= m; ++k) {
    const double x = static_cast<double>(k) * dx;
    if (x >= 2.0 * w && half[k] != 0.0) {
      fail_check("f1 leaks outside the window support", half[k], x);
    }
    if (half[k] < 0.0) fail_check("f1 is negative", half[k], x);
  }

  // Spectrum on [0, R]; the r = 0 entry is B by the same summation.
  const std::size_t nr =
      static_cast<std::size_t>(std::llround(kSpectrumCutoff / kSpectrumStep)) +
      1;
  tf.spectrum_step = kSpectrumStep;
  tf.spectrum_cutoff = kSpectrumCutoff;
  tf.spectrum.resize(nr);
  for (std::size_t k = 0; k < nr; ++k) {
    tf.spectrum[k] =
        cosine_transform_sum(half, dx, static_cast<double>(k) * kSpectrumStep);
  }
  tf.B = tf.spectrum[0];
  if (!(tf.B > 0.0)) fail_check("B = ∫ f1 is not positive", tf.B, 0.0);

  for (std::size_t k = 0; k < nr; ++k) {
    const double r = static_cast<double>(k) * kSpectrumStep;
    if (tf.spectrum[k] < -kNonnegTol) {
      fail_check("h1 drops below -1e-12", tf.spectrum[k], r);
    }
    if (k > 0) {
      const double slope =
          (tf.spectrum[k] - tf.spectrum[k - 1]) / kSpectrumStep;
      if (slope > kMonotoneTol) {
        fail_check("h1 increases by more than 1e-10 per unit", slope, r);
      }
    }
  }

  // Power-law tail model, fitted as the envelope over [R/2, R].
  tf.tail_exponent = kTailExponent;
  double c_tail = 0.0;
  for (std::size_t k = 0; k < nr; ++k) {
    const double r = static_cast<double>(k) * kSpectrumStep;
    if (r < 0.5 * kSpectrumCutoff - 1e-12) continue;
    c_tail = std::max(c_tail,
                      tf.spectrum[k] * std::pow(1.0 + r, kTailExponent));
  }
  tf.tail_coefficient = c_tail;

  // A = min of f1 over [1/6, 1/3]: scan the stored grid, then refine with
  // direct off-grid evaluations at 1e-4 spacing including the endpoints.
  double a_min = std::numeric_limits<double>::infinity();
  double a_loc = kWindowLo;
  for (std::size_t k = 0; k <= m; ++k) {
    const double x = static_cast<double>(k) * dx;
    if (x < kWindowLo - 1e-12 || x > kWindowHi + 1e-12) continue;
    if (half[k] < a_min) {
      a_min = half[k];
      a_loc = x;
    }
  }
  const std::size_t refine_n = static_cast<std::size_t>(
      std::ceil((kWindowHi - kWindowLo) / kRefineStep));
  for (std::size_t k = 0; k <= refine_n; ++k) {
    const double x =
        std::min(kWindowLo + static_cast<double>(k) * kRefineStep, kWindowHi);
    const double fx = window_raw(x, w);
    const double val = fx * fx / b_raw;
    if (val < a_min) {
      a_min = val;
      a_loc = x;
    }
  }
  tf.A = a_min;
  if (!(tf.A > 0.0)) {
    fail_check("A = min of f1 over [1/6,1/3] is not positive", tf.A, a_loc);
  }

  // Double-resolution oracle: rebuild f1 at half the grid step and compare
  // its transform with the stored spectrum.
  const double dx2 = 0.5 * dx;
  std::vector<double> half2(2 * m + 1);
  for (std::size_t k = 0; k <= 2 * m; ++k) {
    if (k % 2 == 0) {
      half2[k] = half[k / 2];
    } else {
      const double fx = window_raw(static_cast<double>(k) * dx2, w);
      half2[k] = fx * fx / b_raw;
    }
  }
  for (std::size_t k = 0; k < nr; ++k) {
    const double r = static_cast<double>(k) * kSpectrumStep;
    const double oracle = cosine_transform_sum(half2, dx2, r);
    if (std::fabs(oracle - tf.spectrum[k]) > kOracleTol) {
      fail_check("spectrum deviates from the double-resolution oracle",
                 oracle - tf.spectrum[k], r);
    }
  }

  // Transform round trip: invert the double-resolution transform sampled at
  // spectral step 1/2 (exact for support in [-1,1] by Poisson summation, so
  // only the truncation beyond the cutoff matters) and compare with the grid.
  const double dr = 0.5;
  const std::size_t rt_n =
      static_cast<std::size_t>(std::llround((256.0 / w) / dr));
  std::vector<double> coarse(rt_n + 1);
  for (std::size_t k = 0; k <= rt_n; ++k) {
    coarse[k] = cosine_transform_sum(half2, dx2, static_cast<double>(k) * dr);
  }
  const double peak = *std::max_element(half.begin(), half.end());
  for (std::size_t j = 0; j <= m; ++j) {
    const double x = static_cast<double>(j) * dx;
    double acc = 0.5 * coarse[0];
    for (std::size_t k = 1; k <= rt_n; ++k) {
      acc += coarse[k] * std::cos(static_cast<double>(k) * dr * x);
    }
    const double rec = (dr / std::numbers::pi) * acc;
    if (std::fabs(rec - half[j]) > kRoundTripTol * peak) {
      fail_check("transform round trip misses the grid", rec - half[j], x);
    }
  }

  // Defining identity: the transform of f must equal the right-integrated
  // spectral profile g(r) = ∫_r^∞ t phi_hat(t)^2 dt (f was produced from g
  // through the closed-form inverse transform).
  {
    const double r_top = 384.0 / w;
    for (const double r0 : {0.0, 0.5, 3.0, 11.0}) {
      const QuadResult q = integrate(
          [&](double t) {
            const double p = bump_transform(t, w);
            return t * p * p;
          },
          r0, r_top, 1e-12);
      const double fhat = cosine_transform_sum(raw, dx, r0);
      if (std::fabs(fhat - q.value) > kIdentityTol * (1.0 + std::fabs(q.value))) {
        fail_check("transform of f deviates from the spectral profile",
                   fhat - q.value, r0);
      }
    }
  }

  return tf;
}

ScaledTestFunction scale_to_T(const TestFunctionPair& tf, double T) {
  if (!std::isfinite(T) || !(T >= 1.0)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "scale_to_T: T must be >= 1, got %.17g",
                  T);
    throw std::invalid_argument(buf);
  }
  ScaledTestFunction scaled;
  scaled.base = tf;
  scaled.T = T;
  return scaled;
}

double h_imag(const TestFunctionPair& tf, double s, double T) {
  if (!std::isfinite(s) || s < 0.0 || s > 0.5) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "h_imag: s must lie in [0, 1/2], got %.17g",
                  s);
    throw std::invalid_argument(buf);
  }
  if (!std::isfinite(T) || !(T >= 1.0)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "h_imag: T must be >= 1, got %.17g", T);
    throw std::invalid_argument(buf);
  }
  if (tf.grid.size() < 3 || tf.grid.size() % 2 == 0) {
    throw std::invalid_argument("h_imag: test function pair is not built");
  }
  const std::size_t mid = tf.grid.size() / 2;
  const double a = s * T;
  double acc = tf.grid[mid];
  for (std::size_t k = 1; k <= mid; ++k) {
    acc += 2.0 * tf.grid[mid + k] *
           std::cosh(a * (static_cast<double>(k) * tf.grid_step));
  }
  return T * (tf.grid_step * acc);
}

void write_grid_csv(const TestFunctionPair& tf, std::ostream& out) {
  out << "x,f1\n";
  char buf[80];
  for (std::size_t j = 0; j < tf.grid.size(); ++j) {
    const double x =
        -1.0 + static_cast<double>(j) * tf.grid_step;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, tf.grid[j]);
    out << buf;
  }
}

void write_spectrum_csv(const TestFunctionPair& tf, std::ostream& out) {
  out << "r,h1\n";
  char buf[80];
  for (std::size_t k = 0; k < tf.spectrum.size(); ++k) {
    const double r = static_cast<double>(k) * tf.spectrum_step;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", r, tf.spectrum[k]);
    out << buf;
  }
}

}  // namespace cuspeig

#pragma once

// Construction of the even, nonnegative window function f1 (supported in
// [-1, 1]) and its cosine transform h1 that drive the trace-based certifier.
//
// The pipeline starts from the standard smooth bump
//   phi(x) = exp(-1 / (1 - (x/w)^2))   on (-w, w),  w = bump width <= 1/2,
// forms the odd spectral density  psi_hat(xi) = -xi * phi_hat(xi)^2,  and
// integrates it from the right to obtain the even, nonnegative, monotone
// spectral profile  g(xi) = -∫_xi^∞ psi_hat.  The window f is the inverse
// transform of g; by the Fourier derivative rule it has the closed form
//   f(x) = -(phi * phi)'(x) / x,        f(0) = ∫ phi'(y)^2 dy,
// which this module evaluates directly (no oscillatory inversion).  The
// shipped window is f1 = f^2 >= 0, rescaled so that ∫ f1 = 1, and
//   h1(r) = ∫ f1(t) e^{-irt} dt = 2 ∫_0^1 f1(t) cos(rt) dt
// is real, even, nonnegative and monotone nonincreasing on [0, ∞).
//
// Because f1 is supported in [-1, 1] and h1 decays super-polynomially,
// uniform trapezoid sums evaluate both transforms exactly up to truncation
// (Poisson summation: no aliasing for spectral steps <= pi), so the stored
// grids carry the transforms at near machine accuracy.

#include <iosfwd>
#include <vector>

namespace cuspeig {

// Immutable window/transform pair.  All sampled data is uniform:
//   grid[j]     = f1(-1 + j*grid_step)            on [-1, 1]
//   spectrum[k] = h1(k*spectrum_step)             on [0, spectrum_cutoff]
// Beyond the cutoff, h1 is modelled by the fitted power tail
//   tail_model(r) = tail_coefficient / (1 + r)^tail_exponent
// clamped below the last stored sample so the evaluator stays monotone.
struct TestFunctionPair {
  double bump_width = 0.5;        // half-width w of the underlying bump
  double grid_step = 1.0 / 4096;  // spacing of the f1 samples
  std::vector<double> grid;       // f1 on [-1, 1]; even, >= 0, endpoints 0

  double spectrum_step = 1.0 / 64;  // spacing of the h1 samples
  double spectrum_cutoff = 64.0;    // last stored spectral point R
  std::vector<double> spectrum;     // h1 on [0, R]; monotone nonincreasing

  double tail_coefficient = 0.0;  // C in C/(1+r)^N, fitted on [R/2, R]
  int tail_exponent = 8;          // N

  double A = 0.0;  // min of f1 over [1/6, 1/3] (refined off-grid); > 0
  double B = 0.0;  // ∫_{-1}^{1} f1 = h1(0); equals 1 up to rounding

  // f1 at an arbitrary point: exact 0 outside [-1, 1], clamped cubic
  // interpolation of the stored grid inside (never negative).
  double f1(double x) const;

  // h1 at an arbitrary point (even in r): clamped cubic interpolation of the
  // stored spectrum on [0, R], min(tail_model, last sample) beyond.  The
  // clamps keep the evaluator monotone nonincreasing on [0, ∞).
  double h1(double r) const;

  // The fitted power-law tail C/(1+|r|)^N (valid as a model for |r| > R).
  double tail_model(double r) const;
};

// The T-rescaled pair: f_T(x) = f1(x/T) supported in [-T, T], and
// h_T(r) = T * h1(T r).  Since h1 is monotone nonincreasing on [0, ∞) and
// T >= 1, the domination h_T(r) <= T * h1(r) holds for all real r.
struct ScaledTestFunction {
  TestFunctionPair base;
  double T = 1.0;

  double f(double x) const;  // f_T(x) = base.f1(x / T)
  double h(double r) const;  // h_T(r) = T * base.h1(T * r)
};

// Builds the window pair from scratch and verifies every invariant:
// support exact, evenness, f1 >= 0, h1 >= -1e-12 and monotone within 1e-10
// per unit on [0, R], transform round-trip within 1e-9 relative (against a
// double-resolution quadrature oracle), A > 0, B > 0.
//
// bump_width must lie in (1/6, 1/2]: above 1/2 the squared window would leak
// outside [-1, 1], and at or below 1/6 its support [-2w, 2w] no longer covers
// [1/6, 1/3], forcing A = 0.  grid_step must evenly divide 1.
//
// Throws std::invalid_argument for parameter violations and PrecisionError
// (naming the offending check and location) if a constructed invariant fails.
TestFunctionPair build_f1(double bump_width = 0.5,
                          double grid_step = 1.0 / 4096);

// Rescales the pair to horizon T >= 1 (T = 1 returns the base unchanged).
// Throws std::invalid_argument if T < 1 or not finite.
ScaledTestFunction scale_to_T(const TestFunctionPair& tf, double T);

// The transform of f_T evaluated on the imaginary axis:
//   h_T(is) = ∫_{-T}^{T} f_T(t) e^{ts} dt = T ∫_{-1}^{1} f1(u) e^{uTs} du,
// computed by the same trapezoid weights as B, so h_imag(tf, 0, T) == T*B
// exactly and 0 <= h_imag <= B*T*e^{sT} always.  Requires 0 <= s <= 1/2 and
// T >= 1; throws std::invalid_argument otherwise.
double h_imag(const TestFunctionPair& tf, double s, double T);

// Two-column CSV dumps (header line + one row per sample, full precision).
void write_grid_csv(const TestFunctionPair& tf, std::ostream& out);      // x,f1
void write_spectrum_csv(const TestFunctionPair& tf, std::ostream& out);  // r,h1

}  // namespace cuspeig

#pragma once

// Closed-form hyperbolic-geometry quantities for finite-area surfaces with
// cusps: volumes, splitting lengths of pants boundaries, collar/cusp
// comparison functions, and horocycle-contact boundary-length bounds.
//
// All functions are pure, double precision, and safe to call concurrently.

#include <cstdint>

namespace cuspeig {

// Homeomorphism type of a finite-area hyperbolic surface: genus g with n
// cusps. Valid surfaces here are hyperbolic with at least one cusp.
struct SurfaceSignature {
  int genus = 0;
  int cusps = 0;

  // 2g + n - 2: the negative Euler characteristic. Also the cap on the
  // number of Laplacian eigenvalues below 1/4.
  int euler_like() const { return 2 * genus + cusps - 2; }
};

// Throws std::invalid_argument unless g >= 0, n >= 1 and 2g + n - 2 >= 1.
void validate_signature(const SurfaceSignature& sig);

// Hyperbolic area 2*pi*(2g + n - 2). Throws on invalid signatures.
double volume(const SurfaceSignature& sig);

// Length of the two orthogonal splitting arcs' closed geodesic when a pants
// boundary of length l is cut: 4*asinh(1/sinh(l/4)). Strictly decreasing,
// and involutive in the sense sinh(l/4)*sinh(result/4) = 1.
// Throws std::invalid_argument if l <= 0.
double orthogonal_pants_split(double l);

// Comparison length beta(l) = l*cosh(acosh(2/l)^(1/4)/2) used when a short
// curve of length l <= 1 is widened to its collar boundary.
// Throws std::invalid_argument unless 0 < l <= 1.
double beta_gamma(double l);

struct BetaBound {
  double bound = 0.0;   // 2 / n^(2(1-kappa))
  bool valid = false;   // n >= exp(2^(-7/3) * kappa^(-4/3))
  double min_n = 0.0;   // the validity threshold on n
};

// Closed-form upper bound for beta_gamma(1/n^2): 2/n^(2(1-kappa)), valid for
// n at or above an explicit threshold depending on kappa.
// Throws std::invalid_argument unless n >= 2 and 0 < kappa < 1/2.
BetaBound beta_bound(std::int64_t n, double kappa);

enum class HorocycleContact {
  kTwoCuspTouch,    // horocycles of two distinct cusps touch
  kSelfIntersect,   // the horocycle of one cusp touches itself
};

// Total boundary-geodesic length bound of the embedded pants produced by a
// horocycle contact at parameter t: 2t for a two-cusp touch (one geodesic of
// length <= 2t), t for a self-intersection (two geodesics of total length
// <= t). Throws std::invalid_argument if t <= 0.
double horocycle_pants_bounds(double t, HorocycleContact kind);

}  // namespace cuspeig

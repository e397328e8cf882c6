#pragma once

// Real 2x2 unit-determinant matrices acting on the hyperbolic plane, the
// trace-length dictionary, and distances between boundary-anchored geodesics.
// Boundary points live on the circle R + {infinity}; a single unsigned
// infinity is represented by +inf (with -inf accepted as an alias on input).

#include <string>

namespace cuspeig {

enum class IsometryType { kIdentity, kElliptic, kParabolic, kHyperbolic };

struct MobiusTransform {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static MobiusTransform identity() { return {}; }

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }

  // Matrix product (this * rhs).  Products of unit-determinant matrices are
  // left unrescaled: the true determinant drifts only by a relative
  // O(n * eps) over n products, while the computed a*d - b*c is pure
  // cancellation noise once entries are large, so no correction based on it
  // would be sound.
  MobiusTransform times(const MobiusTransform& rhs) const;

  MobiusTransform inverse() const { return {d, -b, -c, a}; }

  // Integer power by repeated multiplication (exponents are syllable-sized).
  MobiusTransform power(int e) const;

  // Action on the boundary circle; x may be +/-inf (one point at infinity).
  double apply(double x) const;
};

// Classification by |trace| with tolerance tol for the parabolic boundary
// and an entry tolerance for +/-identity.
IsometryType classify(const MobiusTransform& m, double tol = 1e-9);

// 2*acosh(|tr|/2) for |tr| > 2; 0 for parabolic traces (within 1e-9);
// throws std::domain_error for elliptic traces.
double trace_to_length(double tr);

// Translation length of a hyperbolic transform; 0 for parabolic.
// Throws std::domain_error if m is +/-identity or elliptic.
double translation_length(const MobiusTransform& m);

// diag(e^{l/2}, e^{-l/2}); translation length exactly l. Throws if l <= 0.
MobiusTransform hyperbolic_generator(double l);

struct FixedPoints {
  double attracting = 0.0;  // may be +inf
  double repelling = 0.0;   // may be +inf; equals attracting for parabolic
};

// Boundary fixed points of a non-identity transform, classified by the
// derivative. Throws std::domain_error for elliptic or identity input.
FixedPoints fixed_points(const MobiusTransform& m);

// Infimum of the hyperbolic distance between the geodesic with ideal
// endpoints {a1, b1} and the one with endpoints {a2, b2} (any endpoint may
// be inf). Returns 0 when they intersect, touch, or share an endpoint.
// The second geodesic's endpoints are inflated by a relative epsilon so the
// result is a slight underestimate (safe as a pruning lower bound).
double geodesic_gap(double a1, double b1, double a2, double b2);

// cosh of geodesic_gap (the inversive distance between the boundary
// circles, clamped below at 1). Monotone in the gap, so threshold tests
// `gap > t` can be evaluated as `geodesic_gap_cosh(...) > cosh(t)` without
// the acosh; used in enumeration inner loops.
double geodesic_gap_cosh(double a1, double b1, double a2, double b2);

}  // namespace cuspeig

#include "cuspeig/mobius.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cuspeig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_infinite(double x) { return std::isinf(x); }

}  // namespace

MobiusTransform MobiusTransform::times(const MobiusTransform& rhs) const {
  return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
          c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

MobiusTransform MobiusTransform::power(int e) const {
  MobiusTransform base = e >= 0 ? *this : inverse();
  int n = e >= 0 ? e : -e;
  MobiusTransform out = identity();
  while (n > 0) {
    if (n & 1) out = out.times(base);
    base = base.times(base);
    n >>= 1;
  }
  return out;
}

double MobiusTransform::apply(double x) const {
  if (is_infinite(x)) {
    if (c == 0.0) return kInf;
    return a / c;
  }
  const double den = c * x + d;
  if (den == 0.0) return kInf;
  const double num = a * x + b;
  const double y = num / den;
  if (std::isnan(y)) {
    throw std::domain_error("MobiusTransform::apply produced NaN");
  }
  return y;
}

IsometryType classify(const MobiusTransform& m, double tol) {
  const double tr = std::fabs(m.trace());
  if (std::fabs(m.b) <= tol && std::fabs(m.c) <= tol &&
      std::fabs(std::fabs(m.a) - 1.0) <= tol && std::fabs(std::fabs(m.d) - 1.0) <= tol &&
      tol >= std::fabs(tr - 2.0)) {
    return IsometryType::kIdentity;
  }
  if (std::fabs(tr - 2.0) <= tol) return IsometryType::kParabolic;
  if (tr < 2.0) return IsometryType::kElliptic;
  return IsometryType::kHyperbolic;
}

double trace_to_length(double tr) {
  const double t = std::fabs(tr);
  if (std::fabs(t - 2.0) <= 1e-9) return 0.0;
  if (t < 2.0) {
    throw std::domain_error("trace_to_length: elliptic trace " + std::to_string(tr));
  }
  return 2.0 * std::acosh(t / 2.0);
}

double translation_length(const MobiusTransform& m) {
  switch (classify(m)) {
    case IsometryType::kIdentity:
      throw std::domain_error("translation_length: +/-identity has no axis");
    case IsometryType::kElliptic:
      throw std::domain_error("translation_length: elliptic transform, trace " +
                              std::to_string(m.trace()));
    case IsometryType::kParabolic:
      return 0.0;
    case IsometryType::kHyperbolic:
      return trace_to_length(m.trace());
  }
  throw std::logic_error("translation_length: unreachable");
}

MobiusTransform hyperbolic_generator(double l) {
  if (!(l > 0.0)) {
    throw std::invalid_argument("hyperbolic_generator: length must be positive, got " +
                                std::to_string(l));
  }
  const double lambda = std::exp(l / 2.0);
  return {lambda, 0.0, 0.0, 1.0 / lambda};
}

FixedPoints fixed_points(const MobiusTransform& m) {
  const IsometryType type = classify(m);
  if (type == IsometryType::kIdentity || type == IsometryType::kElliptic) {
    throw std::domain_error("fixed_points: transform has no boundary fixed points");
  }
  const double tr = m.trace();
  if (m.c == 0.0) {
    // Fixed points are infinity and b/(d-a) (the latter only when a != d).
    if (type == IsometryType::kParabolic) return {kInf, kInf};
    const double finite = m.b / (m.d - m.a);
    // Derivative at infinity equals (a/d)^2... compare |a| vs |d|: |a| > |d|
    // means infinity attracts.
    if (std::fabs(m.a) > std::fabs(m.d)) return {kInf, finite};
    return {finite, kInf};
  }
  // Roots of c x^2 + (d - a) x - b = 0; discriminant tr^2 - 4 for det 1.
  const double disc = tr * tr - 4.0;
  if (type == IsometryType::kParabolic) {
    const double x = (m.a - m.d) / (2.0 * m.c);
    return {x, x};
  }
  const double sq = std::sqrt(std::max(disc, 0.0));
  // Stable quadratic roots: q = -(B + sign(B) sqrt(D))/2 with A=c, B=d-a, C=-b.
  const double bb = m.d - m.a;
  double r1, r2;
  if (bb >= 0.0) {
    const double q = -(bb + sq) / 2.0;
    r1 = q / m.c;
    r2 = (q != 0.0) ? -m.b / q : (-bb + sq) / (2.0 * m.c);
  } else {
    const double q = -(bb - sq) / 2.0;
    r1 = q / m.c;
    r2 = (q != 0.0) ? -m.b / q : (-bb - sq) / (2.0 * m.c);
  }
  // The derivative magnitude at a fixed point is 1/(cx+d)^2, so the root
  // with the larger |cx+d| is the attracting one.
  const double d1 = std::fabs(m.c * r1 + m.d);
  const double d2 = std::fabs(m.c * r2 + m.d);
  if (d1 > d2) return {r1, r2};
  return {r2, r1};
}

namespace {

struct BoundaryCircle {
  bool vertical = false;
  double v = 0.0;       // line position when vertical
  double center = 0.0;  // semicircle center when not
  double radius = 0.0;
};

BoundaryCircle make_circle(double a, double b) {
  BoundaryCircle g;
  const bool ia = std::isinf(a), ib = std::isinf(b);
  if (ia && ib) {
    throw std::invalid_argument("geodesic_gap: both endpoints at infinity");
  }
  if (ia || ib) {
    g.vertical = true;
    g.v = ia ? b : a;
    return g;
  }
  g.center = 0.5 * (a + b);
  g.radius = 0.5 * std::fabs(b - a);
  return g;
}

}  // namespace

namespace {

// Inversive distance between the two boundary circles, >1 exactly when the
// geodesics are disjoint; values <=1 are collapsed to 1 (gap zero).
double inversive_distance(double a1, double b1, double a2, double b2) {
  // Inflate the second endpoint pair outward by a relative margin so that
  // rounding can only shrink the reported gap (pruning stays sound).
  const double scale = 1.0 + std::fabs(a2) + std::fabs(b2);
  const double margin = 1e-13 * scale;
  if (!std::isinf(a2) && !std::isinf(b2)) {
    if (a2 <= b2) {
      a2 -= margin;
      b2 += margin;
    } else {
      a2 += margin;
      b2 -= margin;
    }
  }
  const BoundaryCircle g1 = make_circle(a1, b1);
  const BoundaryCircle g2 = make_circle(a2, b2);
  double inv;  // inversive distance between the boundary circles
  if (g1.vertical && g2.vertical) return 1.0;  // asymptotic at infinity
  if (g1.vertical) {
    if (g2.radius <= 0.0) return 1.0;
    inv = std::fabs(g2.center - g1.v) / g2.radius;
  } else if (g2.vertical) {
    if (g1.radius <= 0.0) return 1.0;
    inv = std::fabs(g1.center - g2.v) / g1.radius;
  } else {
    if (g1.radius <= 0.0 || g2.radius <= 0.0) return 1.0;
    const double dc = g1.center - g2.center;
    inv = std::fabs(dc * dc - g1.radius * g1.radius - g2.radius * g2.radius) /
          (2.0 * g1.radius * g2.radius);
  }
  if (!(inv > 1.0)) return 1.0;
  if (inv > 1e300) inv = 1e300;
  return inv;
}

}  // namespace

double geodesic_gap(double a1, double b1, double a2, double b2) {
  const double inv = inversive_distance(a1, b1, a2, b2);
  return inv > 1.0 ? std::acosh(inv) : 0.0;
}

double geodesic_gap_cosh(double a1, double b1, double a2, double b2) {
  return inversive_distance(a1, b1, a2, b2);
}

}  // namespace cuspeig

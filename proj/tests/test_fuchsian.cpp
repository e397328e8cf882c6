#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cuspeig/mobius.hpp"
#include "cuspeig/pants_group.hpp"

using namespace cuspeig;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hyperbolic distance between upper half-plane points (x1,y1), (x2,y2).
double hyp_dist(double x1, double y1, double x2, double y2) {
  const double dx = x1 - x2, dy = y1 - y2;
  return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2));
}

// Numerical infimum of the distance between two geodesics given by finite
// ideal endpoints, via dense sampling plus local refinement. Used as an
// independent oracle for geodesic_gap.
double numeric_gap(double a1, double b1, double a2, double b2) {
  auto point_on = [](double a, double b, double s) {
    // s in (0,1) along the semicircle over [min,max]
    const double c = 0.5 * (a + b), r = 0.5 * std::fabs(b - a);
    const double th = s * 3.14159265358979323846;
    return std::pair<double, double>{c + r * std::cos(th), r * std::sin(th)};
  };
  double best = kInf;
  const int n = 400;
  double bs = 0.5, bt = 0.5;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      const double s = static_cast<double>(i) / n, t = static_cast<double>(j) / n;
      auto [x1, y1] = point_on(a1, b1, s);
      auto [x2, y2] = point_on(a2, b2, t);
      const double d = hyp_dist(x1, y1, x2, y2);
      if (d < best) {
        best = d;
        bs = s;
        bt = t;
      }
    }
  }
  // local refinement around the best grid point
  double span = 2.0 / n;
  for (int round = 0; round < 40; ++round) {
    double cs = bs, ct = bt;
    for (int di = -2; di <= 2; ++di) {
      for (int dj = -2; dj <= 2; ++dj) {
        const double s = cs + di * span / 4.0, t = ct + dj * span / 4.0;
        if (s <= 0.0 || s >= 1.0 || t <= 0.0 || t >= 1.0) continue;
        auto [x1, y1] = point_on(a1, b1, s);
        auto [x2, y2] = point_on(a2, b2, t);
        const double d = hyp_dist(x1, y1, x2, y2);
        if (d < best) {
          best = d;
          bs = s;
          bt = t;
        }
      }
    }
    span *= 0.5;
  }
  return best;
}

}  // namespace

TEST_CASE("hyperbolic_generator: trace and translation length") {
  const MobiusTransform M = hyperbolic_generator(1.0);
  CHECK(M.trace() == doctest::Approx(2.2552519304127615705).epsilon(1e-15));
  CHECK(M.b == 0.0);
  CHECK(M.c == 0.0);
  for (double l : {0.5, 1.0, 5.0, 7.3}) {
    CHECK(translation_length(hyperbolic_generator(l)) == doctest::Approx(l).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hyperbolic_generator(0.0), std::invalid_argument);
  CHECK_THROWS_AS(hyperbolic_generator(-1.0), std::invalid_argument);
}

TEST_CASE("classify and translation_length over the isometry types") {
  const MobiusTransform hyp = {std::exp(1.0), 0.0, 0.0, std::exp(-1.0)};
  CHECK(classify(hyp) == IsometryType::kHyperbolic);
  CHECK(translation_length(hyp) == doctest::Approx(2.0).epsilon(1e-14));

  const MobiusTransform par = {1.0, 1.0, 0.0, 1.0};
  CHECK(classify(par) == IsometryType::kParabolic);
  CHECK(translation_length(par) == 0.0);

  const double th = 0.3;
  const MobiusTransform ell = {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
  CHECK(classify(ell) == IsometryType::kElliptic);
  CHECK_THROWS_AS(translation_length(ell), std::domain_error);

  CHECK(classify(MobiusTransform::identity()) == IsometryType::kIdentity);
  const MobiusTransform neg = {-1.0, 0.0, 0.0, -1.0};
  CHECK(classify(neg) == IsometryType::kIdentity);
  CHECK_THROWS_AS(translation_length(MobiusTransform::identity()), std::domain_error);
}

TEST_CASE("trace_to_length: dictionary and round trip") {
  CHECK(trace_to_length(6.0) == doctest::Approx(3.5254943480781721009).epsilon(1e-15));
  CHECK(trace_to_length(-6.0) == doctest::Approx(3.5254943480781721009).epsilon(1e-15));
  CHECK(trace_to_length(2.0) == 0.0);
  CHECK(trace_to_length(-2.0) == 0.0);
  CHECK(trace_to_length(2.0 * std::cosh(1.5)) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK_THROWS_AS(trace_to_length(1.2), std::domain_error);
  for (double l = 0.01; l <= 20.0; l += 0.37) {
    CHECK(trace_to_length(2.0 * std::cosh(l / 2.0)) == doctest::Approx(l).epsilon(1e-12));
  }
}

TEST_CASE("MobiusTransform algebra: inverse, power, apply") {
  const MobiusTransform M = {2.0, 1.0, 3.0, 2.0};  // det 1
  const MobiusTransform I = M.times(M.inverse());
  CHECK(I.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(I.b == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(I.c == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(I.d == doctest::Approx(1.0).epsilon(1e-15));

  const MobiusTransform M3 = M.power(3);
  const MobiusTransform M3ref = M.times(M).times(M);
  CHECK(M3.a == doctest::Approx(M3ref.a).epsilon(1e-14));
  CHECK(M3.d == doctest::Approx(M3ref.d).epsilon(1e-14));
  const MobiusTransform Mm2 = M.power(-2);
  const MobiusTransform Mm2ref = M.inverse().times(M.inverse());
  CHECK(Mm2.b == doctest::Approx(Mm2ref.b).epsilon(1e-14));
  CHECK(M.power(0).a == 1.0);
  CHECK(M.power(0).b == 0.0);

  // apply: generic, pole, infinity
  CHECK(M.apply(1.0) == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  // Pole test uses a transform whose pole -d/c = -1 is exactly representable,
  // so the denominator vanishes identically rather than to rounding error.
  const MobiusTransform P2 = {2.0, 1.0, 1.0, 1.0};  // det 1, pole at -1
  CHECK(P2.apply(-1.0) == kInf);
  CHECK(M.apply(kInf) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const MobiusTransform par = {1.0, 1.0, 0.0, 1.0};
  CHECK(par.apply(kInf) == kInf);
  CHECK(par.apply(-kInf) == kInf);  // single point at infinity
}

TEST_CASE("determinant drift of long products is relative, not absolute") {
  // 1000-fold parabolic product: entries grow linearly, det must stay at 1
  // to near machine precision.
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);
  MobiusTransform P = MobiusTransform::identity();
  const MobiusTransform AB = G.A.times(G.B);
  for (int i = 0; i < 1000; ++i) P = P.times(AB);
  CHECK(std::fabs(P.det() - 1.0) <= 1e-9);

  // 60-letter pseudo-random word in a hyperbolic-generator group: entries
  // reach ~1e12; the determinant error must stay below entries^2 * 1e-13.
  const PantsGroup H = pants_group(1.0, 1.0, 0.0);
  const MobiusTransform gens[4] = {H.A, H.A.inverse(), H.B, H.B.inverse()};
  MobiusTransform W = MobiusTransform::identity();
  unsigned state = 12345u;
  int last = -1;
  for (int i = 0; i < 60; ++i) {
    state = state * 1664525u + 1013904223u;
    int g = static_cast<int>(state >> 16) & 3;
    if (last >= 0 && (g ^ 1) == last) g ^= 2;  // keep the word freely reduced
    W = W.times(gens[g]);
    last = g;
  }
  const double scale = std::max(std::max(std::fabs(W.a), std::fabs(W.b)),
                                std::max(std::fabs(W.c), std::fabs(W.d)));
  CHECK(scale > 1.0);
  CHECK(std::fabs(W.det() - 1.0) <= std::max(1e-13, scale * scale * 1e-13));
}

TEST_CASE("fixed_points: attracting/repelling classification") {
  const MobiusTransform M = hyperbolic_generator(2.0);  // fixes 0 and inf
  const FixedPoints fp = fixed_points(M);
  CHECK(fp.attracting == kInf);
  CHECK(fp.repelling == 0.0);

  const MobiusTransform Minv = M.inverse();
  const FixedPoints fpi = fixed_points(Minv);
  CHECK(fpi.attracting == 0.0);
  CHECK(fpi.repelling == kInf);

  const MobiusTransform par = {1.0, 0.0, -4.0, 1.0};
  const FixedPoints fpp = fixed_points(par);
  CHECK(fpp.attracting == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(fpp.attracting == fpp.repelling);

  CHECK_THROWS_AS(fixed_points(MobiusTransform::identity()), std::domain_error);
}

TEST_CASE("geodesic_gap: shared endpoints, crossings, concentric circles") {
  // crossing geodesics (interleaved endpoints)
  CHECK(geodesic_gap(-1.0, 1.0, 0.0, kInf) == 0.0);
  CHECK(geodesic_gap(-1.0, 1.0, 0.5, 2.0) == 0.0);
  // shared endpoint
  CHECK(geodesic_gap(-1.0, 1.0, 1.0, 3.0) <= 1e-6);
  // concentric semicircles: distance log(R/r)
  CHECK(geodesic_gap(-1.0, 1.0, -4.0, 4.0) == doctest::Approx(std::log(4.0)).epsilon(1e-10));
  CHECK(geodesic_gap(-7.0, 7.0, -2.0, 2.0) ==
        doctest::Approx(std::log(3.5)).epsilon(1e-10));
  // vertical line vs disjoint circle, against the numerical oracle
  const double cases[][4] = {
      {-1.0, 1.0, 2.0, 5.0},
      {-3.0, 0.5, 1.0, 9.0},
      {0.1, 0.2, 0.4, 0.9},
      {-10.0, -2.0, -1.0, 6.0},
  };
  for (const auto& c : cases) {
    const double g = geodesic_gap(c[0], c[1], c[2], c[3]);
    const double n = numeric_gap(c[0], c[1], c[2], c[3]);
    CHECK(g == doctest::Approx(n).epsilon(1e-5));
    // slight-underestimate contract (safe pruning direction)
    CHECK(g <= n + 1e-9);
  }
}

TEST_CASE("pants_group: cusp-only construction P(0,0,0)") {
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);
  CHECK(G.A.a == 1.0);
  CHECK(G.A.b == 1.0);
  CHECK(G.B.c == doctest::Approx(-4.0).epsilon(1e-15));  // t = -4
  CHECK(G.A.times(G.B).trace() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(G.u1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(G.u2 == G.u1);  // parabolic AB
  CHECK(G.w1 == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(G.w2 == G.w1);
  CHECK(G.xa == -kInf);
  CHECK(G.yb == 0.0);
}

TEST_CASE("pants_group: mixed and thick shapes, trace targets") {
  const PantsGroup G1 = pants_group(0.0, 0.0, 1.0);
  CHECK(G1.B.c == doctest::Approx(-4.2552519304127615705).epsilon(1e-15));
  CHECK(G1.A.times(G1.B).trace() ==
        doctest::Approx(-2.0 * std::cosh(0.5)).epsilon(1e-14));

  const PantsGroup G2 = pants_group(1.0, 1.0, 0.0);
  CHECK(G2.B.c == doctest::Approx(-5.086161269630487557).epsilon(1e-15));
  CHECK(std::fabs(G2.A.trace()) == doctest::Approx(2.0 * std::cosh(0.5)).epsilon(1e-14));
  CHECK(std::fabs(G2.B.trace()) == doctest::Approx(2.0 * std::cosh(0.5)).epsilon(1e-14));

  const PantsGroup G3 = pants_group(0.0, 0.0, 7.3);
  CHECK(G3.u1 == doctest::Approx(0.97466729677312827058).epsilon(1e-13));
  CHECK(G3.u2 == doctest::Approx(0.025332703226871729417).epsilon(1e-13));
  CHECK(G3.w1 == doctest::Approx(-0.025332703226871729417).epsilon(1e-13));
  CHECK(G3.w2 == doctest::Approx(-0.97466729677312827058).epsilon(1e-13));

  // thick two-cuff pants must construct (discreteness scan must not
  // misclassify wrap-cancelling conjugates at large entry scale)
  const PantsGroup G4 = pants_group(7.3, 7.3, 0.0);
  CHECK(std::fabs(G4.A.trace()) == doctest::Approx(2.0 * std::cosh(3.65)).epsilon(1e-12));
}

TEST_CASE("pants_group: landmark order and tangency invariants") {
  const double shapes[][3] = {
      {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0},  {1.0, 1.0, 0.0},  {1.5, 0.5, 0.0},
      {0.8, 0.0, 2.0}, {0.0, 0.0, 7.3},  {7.3, 0.0, 0.0},  {0.0, 2.0, 1.0},
      {4.0, 0.0, 4.0}, {7.3, 7.3, 0.0},
  };
  for (const auto& s : shapes) {
    const PantsGroup G = pants_group(s[0], s[1], s[2]);
    CHECK(G.u2 > 0.0);
    CHECK(G.u1 >= G.u2);
    CHECK(G.w1 < 0.0);
    CHECK(G.w2 <= G.w1);
    CHECK(G.xa < G.w2);
    CHECK(G.w1 <= G.yb + 1e-12);
    CHECK(G.yb <= 0.0);
    CHECK(G.sep_lo() == G.w2);
    CHECK(G.sep_hi() == G.u1);
    // exact tangencies of the syllable-image arc structure
    CHECK(G.A.apply(G.w2) == doctest::Approx(G.u2).epsilon(1e-9));
    CHECK(G.A.inverse().apply(G.u1) == doctest::Approx(G.w1).epsilon(1e-9));
    CHECK(G.B.apply(G.u2) == doctest::Approx(G.w2).epsilon(1e-9));
    CHECK(G.B.inverse().apply(G.w1) == doctest::Approx(G.u1).epsilon(1e-9));
    // w_i are fixed by BA
    const MobiusTransform BA = G.B.times(G.A);
    CHECK(BA.apply(G.w1) == doctest::Approx(G.w1).epsilon(1e-9));
    CHECK(BA.apply(G.w2) == doctest::Approx(G.w2).epsilon(1e-9));
  }
}

TEST_CASE("pants_group: input validation") {
  CHECK_THROWS_AS(pants_group(1.0, 1.0, 1.0), std::invalid_argument);  // no cusp
  CHECK_THROWS_AS(pants_group(-1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pants_group(0.0, 8.0, 0.0), std::invalid_argument);  // > max_boundary
  CHECK_THROWS_AS(pants_group(std::nan(""), 0.0, 0.0), std::invalid_argument);
  // custom max_boundary admits longer cuffs
  CHECK_NOTHROW(pants_group(0.0, 8.0, 0.0, 9.0));
}

#include "cuspeig/pants_group.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cuspeig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTangencyTol = 1e-9;
constexpr double kOrderTol = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error("pants_group: " + what);
}

// Cyclically reduced words over {A, A^-1, B, B^-1} up to length l_check must
// be neither elliptic nor +/-identity in a discrete free group.  Restricting
// the classification to cyclically reduced words loses nothing: every
// nontrivial conjugacy class has a cyclically reduced representative of at
// most the same length, and trace is a conjugacy invariant.  It matters for
// robustness: a word that is not cyclically reduced is a conjugate w v w^-1
// of a much shorter element, and when the conjugators carry large entries
// the rounding error of the product can exceed the distance of a parabolic
// trace from the elliptic range.
void check_short_words(const MobiusTransform& A, const MobiusTransform& B, int l_check) {
  const MobiusTransform gens[4] = {A, A.inverse(), B, B.inverse()};
  const char names[4] = {'a', 'A', 'b', 'B'};
  // Iterative DFS over freely reduced words with explicit word tracking so a
  // violation can be reported by name.
  struct Node {
    MobiusTransform m;
    int first;  // generator index of the first letter
    int last;   // generator index of the last letter, -1 at root
    int depth;
    std::string word;
  };
  std::vector<Node> todo;
  todo.push_back({MobiusTransform::identity(), -1, -1, 0, ""});
  while (!todo.empty()) {
    Node n = todo.back();
    todo.pop_back();
    const bool cyclically_reduced = n.depth == 1 || (n.depth > 1 && (n.first ^ 1) != n.last);
    if (cyclically_reduced) {
      // Margin scaled to the rounding noise of the product: entries of
      // magnitude s carry absolute trace error of order s * eps per factor.
      const double scale =
          std::max(std::max(std::fabs(n.m.a), std::fabs(n.m.b)),
                   std::max(std::fabs(n.m.c), std::fabs(n.m.d)));
      const double tol = std::max(1e-9, 1e-13 * scale);
      const IsometryType type = classify(n.m, tol);
      if (type == IsometryType::kElliptic) {
        throw std::domain_error("pants_group: elliptic word " + n.word + " (trace " +
                                std::to_string(n.m.trace()) + "); group is not discrete");
      }
      if (type == IsometryType::kIdentity) {
        throw std::domain_error("pants_group: word " + n.word +
                                " collapses to the identity; group is not free");
      }
    }
    if (n.depth == l_check) continue;
    for (int g = 0; g < 4; ++g) {
      if (n.last >= 0 && (g ^ 1) == n.last) continue;  // skip s s^-1
      todo.push_back(
          {n.m.times(gens[g]), n.depth == 0 ? g : n.first, g, n.depth + 1, n.word + names[g]});
    }
  }
}

}  // namespace

PantsGroup pants_group(double l1, double l2, double l3, double max_boundary, int l_check) {
  const double lengths[3] = {l1, l2, l3};
  int cusps = 0;
  for (double l : lengths) {
    if (!(l >= 0.0) || std::isnan(l)) {
      throw std::invalid_argument("pants_group: boundary lengths must be >= 0");
    }
    if (l == 0.0) {
      ++cusps;
    } else if (l > max_boundary) {
      throw std::invalid_argument("pants_group: boundary length " + std::to_string(l) +
                                  " exceeds maximum " + std::to_string(max_boundary));
    }
  }
  if (cusps == 0) {
    throw std::invalid_argument("pants_group: at least one boundary must be a cusp");
  }

  PantsGroup G;
  G.l1 = l1;
  G.l2 = l2;
  G.l3 = l3;
  const double lambda = std::exp(l1 / 2.0);
  const double mu = std::exp(l2 / 2.0);
  const double t = -2.0 * std::cosh(l3 / 2.0) - lambda * mu - 1.0 / (lambda * mu);
  G.A = {lambda, 1.0, 0.0, 1.0 / lambda};
  G.B = {mu, 0.0, t, 1.0 / mu};

  const MobiusTransform AB = G.A.times(G.B);
  require(std::fabs(std::fabs(G.A.trace()) - 2.0 * std::cosh(l1 / 2.0)) <= kTangencyTol,
          "generator A trace mismatch");
  require(std::fabs(std::fabs(G.B.trace()) - 2.0 * std::cosh(l2 / 2.0)) <= kTangencyTol,
          "generator B trace mismatch");
  require(std::fabs(AB.trace() + 2.0 * std::cosh(l3 / 2.0)) <= kTangencyTol,
          "product AB trace mismatch");

  // Fixed points of AB (u1 attracting, u2 repelling; merged when parabolic).
  if (l3 == 0.0) {
    const double u = (AB.a - AB.d) / (2.0 * AB.c);
    G.u1 = G.u2 = u;
  } else {
    const FixedPoints fp = fixed_points(AB);
    G.u1 = fp.attracting;
    G.u2 = fp.repelling;
  }
  const MobiusTransform Ainv = G.A.inverse();
  G.w1 = Ainv.apply(G.u1);
  G.w2 = Ainv.apply(G.u2);
  G.xa = (lambda == 1.0) ? -kInf : -lambda / (lambda * lambda - 1.0);
  G.yb = (mu == 1.0) ? 0.0 : (mu - 1.0 / mu) / t;

  // w_i must be the fixed points of BA.
  const MobiusTransform BA = G.B.times(G.A);
  require(std::fabs(BA.apply(G.w1) - G.w1) <= kTangencyTol, "w1 is not fixed by BA");
  require(std::fabs(BA.apply(G.w2) - G.w2) <= kTangencyTol, "w2 is not fixed by BA");

  // Circular order of the landmarks.
  require(G.u2 > 0.0 && G.u1 >= G.u2, "AB fixed points must satisfy u1 >= u2 > 0");
  require(G.w1 < 0.0 && G.w2 <= G.w1 + kOrderTol, "BA fixed points must satisfy w2 <= w1 < 0");
  require(G.xa == -kInf || G.xa < G.w2 - kOrderTol, "fixed point of A must lie left of w2");
  require(G.w1 <= G.yb + kOrderTol && G.yb <= 0.0, "order w1 <= yb <= 0 violated");
  if (l3 > 0.0) {
    require(G.u1 > G.u2 + kOrderTol && G.w2 < G.w1 - kOrderTol,
            "hyperbolic AB must have distinct fixed points");
  }

  // Poles of B and B^-1 must sit inside the gaps, so B is continuous on the
  // a-side arc and B^-1 on it as well.
  const double pole_b = -1.0 / (mu * t);      // B(x) -> inf there; equals B^-1(inf)
  const double pole_binv = mu / t;            // B^-1(x) -> inf there; equals B(inf)
  require(pole_b > 0.0 && pole_b < G.u2 - kOrderTol, "pole of B must lie in (0, u2)");
  require(pole_binv > G.w1 + kOrderTol && pole_binv <= G.yb + kOrderTol,
          "pole of B^-1 must lie in (w1, yb]");

  // Alternating containment table. Tangencies first:
  require(std::fabs(G.A.apply(G.w2) - G.u2) <= kTangencyTol, "tangency A(w2) = u2 failed");
  require(std::fabs(Ainv.apply(G.u1) - G.w1) <= kTangencyTol, "tangency A^-1(u1) = w1 failed");
  require(std::fabs(G.B.apply(G.u2) - G.w2) <= kTangencyTol, "tangency B(u2) = w2 failed");
  const MobiusTransform Binv = G.B.inverse();
  require(std::fabs(Binv.apply(G.w1) - G.u1) <= kTangencyTol, "tangency B^-1(w1) = u1 failed");

  // Endpoint inclusions for the four syllable images and their invariance
  // under repeated application (monotone convergence toward the attractor).
  require(G.A.apply(G.u2) >= G.u2 - kOrderTol, "A must move [u2, inf] rightwards");
  require(Ainv.apply(G.w1) <= G.w1 + kOrderTol, "A^-1 must move [xa, w1] leftwards");
  require(G.xa == -kInf || Ainv.apply(G.w2) >= G.xa - kOrderTol,
          "A^-1(w2) must stay right of xa");
  const double b_w1 = G.B.apply(G.w1);
  require(b_w1 >= G.w2 - kOrderTol && b_w1 <= G.yb + kOrderTol,
          "B(w1) must land in [w2, yb]");
  const double b_w2 = G.B.apply(G.w2);
  require(b_w2 >= G.w2 - kOrderTol && b_w2 <= G.yb + kOrderTol,
          "B(w2) must land in [w2, yb]");
  const double binv_u2 = Binv.apply(G.u2);
  require(binv_u2 >= -kOrderTol && binv_u2 <= G.u1 + kOrderTol,
          "B^-1(u2) must land in [0, u1]");
  const double binv_u1 = Binv.apply(G.u1);
  require(binv_u1 >= -kOrderTol && binv_u1 <= G.u1 + kOrderTol,
          "B^-1(u1) must land in [0, u1]");

  check_short_words(G.A, G.B, l_check);
  return G;
}

}  // namespace cuspeig

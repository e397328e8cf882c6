#pragma once

// Discrete free rank-2 groups uniformizing hyperbolic pairs of pants whose
// boundary components are geodesics of prescribed lengths (length 0 = cusp).
// Construction also derives the boundary-circle interval structure used by
// the geodesic enumerator's pruning bounds and verifies it numerically.

#include <vector>

#include "cuspeig/mobius.hpp"

namespace cuspeig {

struct PantsGroup {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;  // boundary lengths, 0 means cusp
  MobiusTransform A, B;                 // generators; third boundary is [AB]

  // Boundary-circle landmarks (see pants_group for the invariants):
  //   u1 >= u2 > 0  : fixed points of AB (attracting, repelling; equal iff
  //                   l3 = 0, where AB is parabolic),
  //   w1 >= w2      : fixed points of BA, w_i = A^{-1}(u_i), both negative,
  //   xa            : finite fixed point of A, or -inf when A is parabolic,
  //   yb            : non-repelling fixed point of B (0 when B is parabolic).
  double u1 = 0.0, u2 = 0.0, w1 = 0.0, w2 = 0.0, xa = 0.0, yb = 0.0;

  // Alternating-syllable containment table (verified at construction):
  //   A^e([w2, u1]) inside [u2, +inf]   for e >= 1,
  //   A^e([w2, u1]) inside [xa, w1]     for e <= -1,
  //   B^f([u2 .. inf .. w1]) inside [w2, yb] for f >= 1,
  //   B^f([u2 .. inf .. w1]) inside [0, u1]  for f <= -1,
  // with exact tangencies A(w2) = u2, A^{-1}(u1) = w1, B(u2) = w2,
  // B^{-1}(w1) = u1. The geodesic (w2 <-> u1) therefore separates the
  // a-side images from the b-side images of every alternating word.
  double sep_lo() const { return w2; }
  double sep_hi() const { return u1; }
};

// Builds the pants group with boundary lengths (l1, l2, l3):
//   A = [[lam, 1], [0, 1/lam]], lam = e^{l1/2},
//   B = [[mu, 0], [t, 1/mu]],   mu  = e^{l2/2},
//   t = -2 cosh(l3/2) - lam mu - 1/(lam mu), so tr(AB) = -2 cosh(l3/2).
// Preconditions: every length >= 0, at least one length equal to 0 (at
// least one cusp), and every nonzero length <= max_boundary.
// Postconditions: generator traces match 2 cosh(l_i/2); the interval
// structure above holds; and no reduced word of letter length <= l_check
// is elliptic or +/-identity (throws std::domain_error naming a violating
// word otherwise).
PantsGroup pants_group(double l1, double l2, double l3, double max_boundary = 7.3,
                       int l_check = 8);

}  // namespace cuspeig

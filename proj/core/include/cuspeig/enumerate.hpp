#pragma once

// Complete enumeration of closed-geodesic conjugacy classes in a cusped
// pants group, up to a length cutoff. Classes are unoriented (a class and
// its inverse are merged) and each is emitted exactly once, keyed by the
// canonical form of its alternating-syllable word A^{e1} B^{f1} ... A^{em}
// B^{fm}. Pruning uses sound separator-geodesic lower bounds, so the output
// is exhaustive: every class of total length <= T appears.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cuspeig/pants_group.hpp"

namespace cuspeig {

struct GeodesicClass {
  // Canonical alternating syllable word of the full class representative
  // (pairs (e_i, f_i) meaning A^{e_i} B^{f_i}); empty for the analytic
  // boundary families [A^k], [B^k], [(AB)^k].
  std::vector<std::pair<int, int>> syllables;
  double length = 0.0;  // length of the underlying primitive geodesic
  int iterate = 1;      // k >= 1; the class is the k-th power of its primitive
  bool primitive = true;
  bool boundary = false;  // conjugate into a boundary geodesic class

  double total_length() const { return iterate * length; }
  std::string canonical_key() const;
};

struct EnumerationBudget {
  std::int64_t max_classes = 1'000'000;
  std::int64_t max_nodes = 200'000'000;
  // Cap on consecutive (1,1) / (-1,-1) syllable pairs (cusp winding runs);
  // 0 derives a cutoff from T with a wide safety factor. If classes are
  // still being emitted near the cap the run is reported as saturated via
  // BudgetError instead of silently truncating.
  int run_cap = 0;
};

// All unoriented conjugacy classes of closed geodesics with total length
// k * l(primitive) <= T, sorted ascending by (total length, canonical key).
// Boundary classes are included with boundary = true (cusps contribute
// none). Deterministic: identical output for any worker count.
// Throws BudgetError when a budget trips, std::invalid_argument on bad
// arguments, std::domain_error if a non-discrete word is encountered.
std::vector<GeodesicClass> length_spectrum(const PantsGroup& G, double T,
                                           const EnumerationBudget& budget = {},
                                           int workers = 1);

// Brute-force enumeration of all cyclic conjugacy classes of cyclically
// reduced words of letter length <= max_word_len (unoriented). Parabolic
// boundary classes appear with length 0. Intended for cross-checks and
// small word-length contracts; max_word_len is capped at 16.
std::vector<GeodesicClass> enumerate_classes(const PantsGroup& G, int max_word_len);

}  // namespace cuspeig

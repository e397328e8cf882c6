#include "cuspeig/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cuspeig/errors.hpp"

namespace cuspeig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Classes are kept when total length <= T + kEmitTol.  Pruning requires the
// sound lower bound to exceed T + kPruneSlack (> kEmitTol), so floating-point
// noise near the cutoff can only cost extra exploration, never a missed class.
constexpr double kEmitTol = 1e-9;
constexpr double kPruneSlack = 1e-7;

// Winding credit is a sound length lower bound; subtrees are abandoned only
// once the credit exceeds T by this generous absolute margin.
constexpr double kCreditSlack = 8.0;

// Hard ceiling on the automatically derived winding-run cap.  Winding runs
// descend recursively, so the cap also bounds recursion depth; 2000 keeps the
// deepest legal path a few thousand frames, far inside a default 8 MiB stack,
// while still giving a severalfold margin over the deepest winding actually
// reachable below T ~ 16 around a cusp.  If a spectrum legitimately wound
// deeper, the saturation valve reports a BudgetError instead of silently
// truncating.
constexpr int kMaxAutoRunCap = 2000;

// Prefix matrices above this entry magnitude no longer support trustworthy
// prune/descend decisions in double precision (see the dynamic-range guard
// note on the Enumerator).
constexpr double kScaleGuard = 1e14;

using PairSeq = std::vector<std::pair<int, int>>;

// Exponent exploration / canonical order: 1, -1, 2, -2, 3, -3, ...
int exponent_rank(int e) { return e > 0 ? 2 * e - 2 : -2 * e - 1; }

bool pair_less(const std::pair<int, int>& x, const std::pair<int, int>& y) {
  const int xe = exponent_rank(x.first), ye = exponent_rank(y.first);
  if (xe != ye) return xe < ye;
  return exponent_rank(x.second) < exponent_rank(y.second);
}

// Rotation r of s, compared lexicographically against base.  Returns -1/0/+1.
int compare_rotation(const PairSeq& s, std::size_t r, const PairSeq& base) {
  const std::size_t m = base.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& x = s[(r + i) % m];
    const auto& y = base[i];
    if (pair_less(x, y)) return -1;
    if (pair_less(y, x)) return 1;
  }
  return 0;
}

// The inverse of A^{e1}B^{f1}...A^{em}B^{fm}, rotated back into a-leading
// pair form: (-e_m, -f_{m-1}), (-e_{m-1}, -f_{m-2}), ..., (-e_1, -f_m).
PairSeq inverse_dual(const PairSeq& s) {
  const std::size_t m = s.size();
  PairSeq out(m);
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = {-s[m - 1 - j].first, -s[(2 * m - 2 - j) % m].second};
  }
  return out;
}

// Index of a lexicographically least rotation of s (Booth's two-pointer
// scan, O(m)).  Words that wind many times around a cusp reach hundreds of
// pairs, so the canonicality test must stay linear in the pair count.
std::size_t least_rotation_index(const PairSeq& s) {
  const std::size_t n = s.size();
  const auto rank = [&](std::size_t idx) {
    const auto& p = s[idx % n];
    return std::make_pair(exponent_rank(p.first), exponent_rank(p.second));
  };
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const auto x = rank(i + k), y = rank(j + k);
    if (x == y) {
      ++k;
      continue;
    }
    if (x > y) {
      i += k + 1;
      if (i == j) ++i;
    } else {
      j += k + 1;
      if (j == i) ++j;
    }
    k = 0;
  }
  return std::min(i, j);
}

// A pair sequence represents its conjugacy class canonically when it is the
// lexicographic minimum over all pair rotations of itself and of its inverse.
bool is_canonical(const PairSeq& s) {
  if (compare_rotation(s, least_rotation_index(s), s) < 0) return false;
  const PairSeq inv = inverse_dual(s);
  return compare_rotation(inv, least_rotation_index(inv), s) >= 0;
}

std::size_t smallest_period(const PairSeq& s) {
  const std::size_t m = s.size();
  for (std::size_t p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = s[i] == s[(i + p) % m];
    if (ok) return p;
  }
  return m;
}

struct SharedCounters {
  std::atomic<std::int64_t> nodes{0};
  std::atomic<std::int64_t> classes{0};
  std::atomic<std::int64_t> near_cap_emits{0};
};

// Depth-first enumerator over alternating syllable words A^{e1}B^{f1}...,
// one pair per recursion level.
//
// Two complementary lower bounds drive the pruning.
//
// Separator bound: for the geodesic S joining the landmarks w2 and u1, every
// hyperbolic g whose axis endpoints are separated by S satisfies
// length(g) >= dist(S, g(S)).  For a prefix P ending in an a-syllable, every
// admissible completion keeps the class axis endpoints inside the image
// under P of the hull [w2, u1]; for a prefix ending in a b-syllable, inside
// the image of the hull through infinity with endpoints u2 and w1.  Exponent
// loops terminate through monotone tail hulls: all a-exponents >= e map
// [w2, u1] into [A^e(w2), +inf] and all <= -e into [x_a, A^{-e}(u1)]; all
// b-exponents >= f map the b-side hull into [B^{f-1}(w2), y_b] and all
// <= -f into [0, B^{-(f-1)}(u1)].  Once the image of a tail hull sits
// farther than T from S, that direction is exhausted.
//
// Winding credit: the separator bound stalls on syllables that wind around a
// geodesic cuff (powers A^e around the length-l1 cuff, B^f around l2, and
// runs of (1,1) or (-1,-1) pairs around the l3 cuff), because the image arcs
// converge to an endpoint of S.  For cuffs of positive length the winding
// itself is length: a closed geodesic whose cyclic word winds k times around
// a cuff of core length l spends at least (k-1)*l on that winding, since the
// nearest-point projection onto the core is 1-Lipschitz and the winding
// subpath projects onto a degree-(k-1) circuit of the core; credits from
// disjoint subwords add.  The accumulated credit is therefore itself a
// length lower bound, and every loop additionally breaks once it exceeds
// T + kCreditSlack.  Cusps (l = 0) earn no credit; there the separator
// bound grows logarithmically in the winding depth, which terminates the
// loops without credit.  An emission-time check verifies the credit claim
// on every class actually found (class length can never be smaller than the
// credit of its word).
//
// Dynamic-range guard: the gap bounds are evaluated in double precision from
// the prefix matrix entries; once those entries pass ~1e14 the image points
// of the hull landmarks carry absolute rounding noise comparable to their
// distances from the separator, and neither a prune nor a descend decision
// can be trusted.  Rather than risk a silently wrong spectrum (mispruning)
// or an unbounded random walk (misdescending), the enumeration refuses with
// a PrecisionError.  Word prefixes explored below the cutoff length T only
// reach such scales when T and the boundary lengths are jointly so large
// that per-pair entry growth exhausts the double range, so the guard is
// inactive for moderate cutoffs.
//
// Leading-run stripping: a word starting with a winding run, P = (AB)^j * Q,
// maps the hull exponentially close to u1, which is an endpoint of S itself.
// Evaluating gap(S, P(hull)) in absolute coordinates then cancels
// catastrophically: the arc's distance to u1 falls below the rounding noise
// of the matrix product and the computed bound collapses to zero even when
// the true bound grows.  Since the gap is an isometry invariant,
// gap(S, P(hull)) = gap(L^{-1} S, Q(hull)) with L the leading run, and in
// the conjugated frame every quantity stays at resolvable scale: u1 is fixed
// by L^{-1} and the moving endpoint (AB)^{-j}(w2) converges to u2, away from
// the image arcs.  The enumerator therefore tracks the prefix with its
// leading (1,1)- or (-1,-1)-run split off and conjugates the separator
// instead.  Symmetrically, a leading (-1,-1)-run fixes w2 and moves u1
// toward w1 under (BA)^j.
class Enumerator {
 public:
  Enumerator(const PantsGroup& G, double T, const EnumerationBudget& budget, int run_cap,
             int workers, int worker_id, SharedCounters& shared)
      : G_(G),
        T_(T),
        A_(G.A),
        Ai_(G.A.inverse()),
        B_(G.B),
        Bi_(G.B.inverse()),
        AB_(G.A.times(G.B)),
        ABi_(G.A.times(G.B).inverse()),
        BA_(G.B.times(G.A)),
        BAi_(G.B.times(G.A).inverse()),
        strip_lead_(G.l3 > 0.0),
        geom_a_(G.l1 > 0.0 ? 1.0 / (G.A.a - G.A.d) : 0.0),
        geom_b_(G.l2 > 0.0 ? 1.0 / (G.B.a - G.B.d) : 0.0),
        cosh_prune_(std::cosh(T + kPruneSlack)),
        budget_(budget),
        run_cap_(run_cap),
        depth_cap_(2 * run_cap + 4096),
        workers_(workers),
        worker_id_(worker_id),
        shared_(shared) {}

  std::vector<GeodesicClass> run() {
    int root_index = 0;
    LeadState lead;
    lead.s1 = G_.w2;
    lead.s2 = G_.u1;
    descend_a(MobiusTransform::identity(), 0, 0, 0, 0.0, lead, &root_index);
    flush_nodes();
    return std::move(out_);
  }

 private:
  // Leading-run split of the current prefix: the full prefix is L * Q where
  // L = (AB)^len (type +1) or (A^{-1}B^{-1})^len (type -1) is its leading
  // winding run and Q is the matrix the descent actually carries.  s1/s2 are
  // the endpoints of L^{-1}(S); all gap bounds evaluate against them with
  // Q-images, which is the same quantity as gap(S, (L*Q)(arc)) but free of
  // the endpoint cancellation described above.  `open` stays true while the
  // whole prefix is a single run, so a matching next pair extends L.
  // Stripping is only engaged for l3 > 0 (hyperbolic AB): for parabolic AB
  // the conjugated separator would degenerate onto the single fixed point,
  // while entries along parabolic runs grow only linearly, which the
  // unconjugated frame handles exactly.
  struct LeadState {
    int type = 0;
    int len = 0;
    bool open = true;
    double s1 = 0.0, s2 = 0.0;
  };

  // Rotation bookkeeping for the canonicality prunes in close_pair: the
  // word's first pair, its leading run of that pair, the current trailing
  // run of it, and whether the word is still one pure run.
  struct CanonState {
    std::pair<int, int> p0{0, 0};
    int lead_run = 0;
    int trail_run = 0;
    bool pure = true;
  };

  // cosh of the gap to the (possibly conjugated) separator; all pruning
  // comparisons run against cosh_prune_ = cosh(T + kPruneSlack), which is
  // the same decision as comparing the gap itself but avoids an acosh in
  // the inner loops.
  double sep_cosh(const LeadState& lead, double p, double q) const {
    return geodesic_gap_cosh(lead.s1, lead.s2, p, q);
  }

  // Trace of the full prefix L * Q.
  double full_trace(const MobiusTransform& Q, const LeadState& lead) const {
    if (lead.len == 0) return Q.trace();
    const MobiusTransform L = (lead.type == 1 ? AB_ : BAi_).power(lead.len);
    return L.times(Q).trace();
  }

  // Dynamic-range guard (see class note): refuse once prefix entries are too
  // large for the gap bounds to be meaningful in double precision.
  void guard_scale(const MobiusTransform& m) const {
    const double s = std::max(std::max(std::fabs(m.a), std::fabs(m.b)),
                              std::max(std::fabs(m.c), std::fabs(m.d)));
    if (s > kScaleGuard) {
      throw PrecisionError(
          "length_spectrum: word prefix entries exceed the dynamic range for trustworthy "
          "pruning bounds; reduce the cutoff T or the boundary lengths");
    }
  }

  void count_node() {
    if (++nodes_local_ >= 8192) flush_nodes();
  }

  void flush_nodes() {
    if (nodes_local_ == 0) return;
    const std::int64_t total = shared_.nodes.fetch_add(nodes_local_) + nodes_local_;
    nodes_local_ = 0;
    if (total > budget_.max_nodes) {
      throw BudgetError("length_spectrum: node budget exceeded (limit " +
                        std::to_string(budget_.max_nodes) + " nodes)");
    }
  }

  // Closed-form generator powers (exponent >= 0).  A is upper triangular
  // with unit shear, so A^e has a geometric-sum shear; B is lower
  // triangular.  Cusps (unit diagonal) degenerate to the linear form.
  MobiusTransform a_pow(int e) const {
    if (G_.l1 == 0.0) return {1.0, static_cast<double>(e), 0.0, 1.0};
    const double p = std::pow(A_.a, e);
    return {p, (p - 1.0 / p) * geom_a_, 0.0, 1.0 / p};
  }
  MobiusTransform ai_pow(int e) const {
    if (G_.l1 == 0.0) return {1.0, -static_cast<double>(e), 0.0, 1.0};
    const double p = std::pow(A_.a, e);
    return {1.0 / p, -(p - 1.0 / p) * geom_a_, 0.0, p};
  }
  MobiusTransform b_pow(int f) const {
    if (G_.l2 == 0.0) return {1.0, 0.0, B_.c * static_cast<double>(f), 1.0};
    const double q = std::pow(B_.a, f);
    return {q, 0.0, B_.c * (q - 1.0 / q) * geom_b_, 1.0 / q};
  }
  MobiusTransform bi_pow(int f) const {
    if (G_.l2 == 0.0) return {1.0, 0.0, -B_.c * static_cast<double>(f), 1.0};
    const double q = std::pow(B_.a, f);
    return {1.0 / q, 0.0, -B_.c * (q - 1.0 / q) * geom_b_, q};
  }

  // Largest exponent magnitude the winding credit allows from this prefix:
  // credit + (k - 1) * step_len must stay within T + kCreditSlack.
  int exp_cap(double step_len, double credit) const {
    const double room = T_ + kCreditSlack - credit;
    if (room < 0.0) return 0;
    if (step_len <= 0.0 || room / step_len >= 1e9) {
      return std::numeric_limits<int>::max() / 2;
    }
    return 1 + static_cast<int>(room / step_len);
  }

  // Scans one syllable direction (one generator, one sign) with exponent k,
  // calling on_live(child, k, credit_k) for every child whose separator
  // bound admits a completion below the cutoff.
  //
  // Geometry per direction: the child with exponent k carries the arc
  // [child(q_lo), child(q_hi)], consecutive arcs overlap (the tangency
  // identities glue arc k+1's near end into arc k), and the arcs slide
  // monotonically toward the direction's limit point.  Three consequences
  // drive the loop:
  //   * break test: the hull [pow(k or k-1)(hull_src) -> limit_pt] covers
  //     every arc with exponent >= k, and its gap is nondecreasing in k,
  //     so one failed test ends the direction;
  //   * exact block test: the union of the arcs for k in [lo, hi] is
  //     exactly [child_lo(q_lo), child_hi(q_hi)], so gap(union) > T proves
  //     every child in the block dead, while gap(union) <= T proves some
  //     child in it live (the union has no filler between member arcs);
  //   * galloping: after each evaluated child, dead blocks are skipped
  //     with doubling width, so a dead stretch of length D costs O(log D)
  //     gap tests instead of D.  All decisions are functions of the
  //     geometry alone, so every worker walks the identical exponent
  //     sequence and round-robin dealing at the root stays aligned.
  // hull_prev shifts the hull's moving endpoint to pow(k-1) for the b
  // directions, whose hull landmark trails the child arc by one power.
  template <class PowFn, class OnLive>
  void scan_direction(const MobiusTransform& R, double step_len, double credit,
                      const LeadState& lead, double hull_src, double limit_pt, double q_lo,
                      double q_hi, bool hull_prev, int* root_index, const PowFn& pow_fn,
                      const OnLive& on_live) {
    const int kmax = exp_cap(step_len, credit);
    int k = 1;
    while (k <= kmax) {
      const double hull_pt = pow_fn(hull_prev ? k - 1 : k).apply(hull_src);
      if (sep_cosh(lead, R.apply(hull_pt), limit_pt) > cosh_prune_) break;
      const MobiusTransform child = R.times(pow_fn(k));
      guard_scale(child);
      bool mine = true;
      if (root_index != nullptr) mine = ((*root_index)++ % workers_) == worker_id_;
      if (mine) {
        count_node();
        if (sep_cosh(lead, child.apply(q_lo), child.apply(q_hi)) <= cosh_prune_) {
          on_live(child, k, credit + (k - 1) * step_len);
        }
      }
      int lo = k + 1;
      long long step = 1;
      while (lo <= kmax) {
        const double hp = pow_fn(hull_prev ? lo - 1 : lo).apply(hull_src);
        if (sep_cosh(lead, R.apply(hp), limit_pt) > cosh_prune_) {
          lo = kmax + 1;  // hull dead: everything from lo on is dead
          break;
        }
        const int hi = static_cast<int>(std::min<long long>(lo + step - 1, kmax));
        const MobiusTransform clo = R.times(pow_fn(lo));
        guard_scale(clo);
        MobiusTransform chi = clo;
        if (hi != lo) {
          chi = R.times(pow_fn(hi));
          guard_scale(chi);
        }
        if (sep_cosh(lead, clo.apply(q_lo), chi.apply(q_hi)) > cosh_prune_) {
          lo = hi + 1;
          step *= 2;
        } else {
          break;  // block holds a live child; resume fine scanning there
        }
      }
      k = lo;
    }
  }

  // Appends an a-syllable to the stripped prefix R.  credit is the winding
  // length already charged to the prefix.  root_index is non-null exactly at
  // the root, where children are dealt round-robin across workers;
  // everything below an owned root child belongs to this worker alone.
  void descend_a(const MobiusTransform& R, int depth, int run11, int runmm, double credit,
                 const LeadState& lead, int* root_index) {
    if (depth >= depth_cap_) {
      throw BudgetError("length_spectrum: syllable depth cap exceeded; raise run_cap/budgets");
    }
    scan_direction(R, G_.l1, credit, lead, /*hull_src=*/G_.w2, R.apply(kInf),
                   /*q_lo=*/G_.w2, /*q_hi=*/G_.u1, /*hull_prev=*/false, root_index,
                   [this](int e) { return a_pow(e); },
                   [&](const MobiusTransform& child, int e, double c) {
                     descend_b(child, e, depth, run11, runmm, c, lead);
                   });
    scan_direction(R, G_.l1, credit, lead, /*hull_src=*/G_.u1, R.apply(G_.xa),
                   /*q_lo=*/G_.u1, /*q_hi=*/G_.w2, /*hull_prev=*/false, root_index,
                   [this](int e) { return ai_pow(e); },
                   [&](const MobiusTransform& child, int e, double c) {
                     descend_b(child, -e, depth, run11, runmm, c, lead);
                   });
  }

  // Appends a b-syllable to Ra = R * A^e, closing the pair (e, f); credit
  // already includes the charge for the a-syllable.
  void descend_b(const MobiusTransform& Ra, int e, int depth, int run11, int runmm,
                 double credit, const LeadState& lead) {
    scan_direction(Ra, G_.l2, credit, lead, /*hull_src=*/G_.w2, Ra.apply(G_.yb),
                   /*q_lo=*/G_.u2, /*q_hi=*/G_.w1, /*hull_prev=*/true, nullptr,
                   [this](int f) { return b_pow(f); },
                   [&](const MobiusTransform& child, int f, double c) {
                     close_pair(child, e, f, depth, run11, runmm, c, lead);
                   });
    scan_direction(Ra, G_.l2, credit, lead, /*hull_src=*/G_.u1, Ra.apply(0.0),
                   /*q_lo=*/G_.w1, /*q_hi=*/G_.u2, /*hull_prev=*/true, nullptr,
                   [this](int f) { return bi_pow(f); },
                   [&](const MobiusTransform& child, int f, double c) {
                     close_pair(child, e, -f, depth, run11, runmm, c, lead);
                   });
  }

  void close_pair(const MobiusTransform& P, int e, int f, int depth, int run11, int runmm,
                  double credit, LeadState lead) {
    pairs_.emplace_back(e, f);

    // Canonicality subtree pruning.  The canonical representative of a class
    // is the lex-min rotation, so a word whose rotations provably beat it can
    // never emit, and neither can any extension: appended pairs leave the
    // first pair and every interior run in place.  Two O(1) rules catch the
    // bulk (the full check at emission covers the rest):
    //   * a closed pair strictly below the first pair starts a smaller
    //     rotation in every extension;
    //   * when a breaker ends an interior run of the first-pair value that
    //     is strictly longer than the leading run, the rotation starting at
    //     that run wins (equal prefix, then first-pair value vs breaker).
    // Canonical words never trip either rule (their first pair is minimal
    // and no interior run exceeds the lead), so every class still emits
    // exactly once, at its canonical word.
    const CanonState saved_canon = canon_;
    const std::pair<int, int> q{e, f};
    bool prune = false;
    if (pairs_.size() == 1) {
      canon_.p0 = q;
      canon_.lead_run = 1;
      canon_.trail_run = 1;
      canon_.pure = true;
    } else if (pair_less(q, canon_.p0)) {
      prune = true;
    } else if (q == canon_.p0) {
      if (canon_.pure) ++canon_.lead_run;
      ++canon_.trail_run;
    } else {
      if (!canon_.pure && canon_.trail_run > canon_.lead_run) prune = true;
      canon_.pure = false;
      canon_.trail_run = 0;
    }
    if (prune) {
      canon_ = saved_canon;
      pairs_.pop_back();
      return;
    }

    const int r11 = (e == 1 && f == 1) ? run11 + 1 : 0;
    const int rmm = (e == -1 && f == -1) ? runmm + 1 : 0;
    // The second and each further pair of an unbroken (1,1) or (-1,-1) run
    // wind once more around the l3 cuff.
    if (r11 >= 2 || rmm >= 2) credit += G_.l3;

    // Absorb the pair into the leading run while the prefix is one pure run:
    // the carried matrix resets to the identity and the separator is
    // conjugated one more step instead.  The conjugated endpoint iterations
    // converge to u2 (type +1) resp. w1 (type -1), so they stay resolved
    // away from the image arcs.
    MobiusTransform Q = P;
    if (strip_lead_ && lead.open && e == f && (e == 1 || e == -1) &&
        (pairs_.size() == 1 || lead.type == e)) {
      if (pairs_.size() == 1) {
        lead.type = e;
        lead.len = 1;
        lead.s1 = (e == 1) ? G_.u1 : G_.w2;  // the endpoint L^{-1} fixes
        lead.s2 = (e == 1) ? ABi_.apply(G_.w2) : BA_.apply(G_.u1);
      } else {
        ++lead.len;
        lead.s2 = (lead.type == 1) ? ABi_.apply(lead.s2) : BA_.apply(lead.s2);
      }
      Q = MobiusTransform::identity();
    } else {
      lead.open = false;
    }

    emit_if_canonical(Q, lead, r11, rmm, credit);
    if (r11 < run_cap_ && rmm < run_cap_ && credit <= T_ + kCreditSlack) {
      descend_a(Q, depth + 1, r11, rmm, credit, lead, nullptr);
    }
    canon_ = saved_canon;
    pairs_.pop_back();
  }

  void emit_if_canonical(const MobiusTransform& Q, const LeadState& lead, int r11, int rmm,
                         double credit) {
    // A trailing run of the first-pair value with a breaker elsewhere is
    // never canonical: rotating the trailing run to the front lengthens the
    // leading run, which wins at the first breaker position.
    if (!canon_.pure && canon_.trail_run >= 1) return;
    // Pure powers of AB are the l3 boundary family, handled analytically.
    if (canon_.pure && ((canon_.p0.first == 1 && canon_.p0.second == 1) ||
                        (canon_.p0.first == -1 && canon_.p0.second == -1))) {
      return;
    }
    // Length pre-filter on the whole word before the O(m) canonicality
    // check: the trace of a k-fold iterate yields exactly k times the
    // primitive length.  A small slack keeps the precise primitive-based
    // filter below authoritative at the tolerance edge.
    const double tr_full = full_trace(Q, lead);
    if (!std::isfinite(tr_full)) {
      throw PrecisionError(
          "length_spectrum: class trace overflowed double range; reduce the cutoff T or the "
          "boundary lengths");
    }
    if (std::fabs(tr_full) <= 2.0 + 1e-9) {
      throw std::domain_error(
          "length_spectrum: non-boundary word with |trace| <= 2; the group is not discrete "
          "and free on these generators");
    }
    if (trace_to_length(tr_full) > T_ + kEmitTol + 1e-6) return;
    if (!is_canonical(pairs_)) return;

    const std::size_t m = pairs_.size();
    const std::size_t p = smallest_period(pairs_);
    const int k = static_cast<int>(m / p);
    double tr;
    if (k == 1) {
      tr = full_trace(Q, lead);
    } else {
      MobiusTransform prim = MobiusTransform::identity();
      for (std::size_t i = 0; i < p; ++i) {
        prim = prim.times(A_.power(pairs_[i].first)).times(B_.power(pairs_[i].second));
      }
      tr = prim.trace();
    }
    if (!std::isfinite(tr)) {
      throw PrecisionError(
          "length_spectrum: class trace overflowed double range; reduce the cutoff T or the "
          "boundary lengths");
    }
    if (std::fabs(tr) <= 2.0 + 1e-9) {
      throw std::domain_error(
          "length_spectrum: non-boundary word with |trace| <= 2; the group is not discrete "
          "and free on these generators");
    }
    const double prim_len = trace_to_length(tr);
    if (k * prim_len > T_ + kEmitTol) return;
    if (k * prim_len + 1e-6 < credit) {
      throw std::domain_error(
          "length_spectrum: winding credit exceeds the length of an enumerated class; "
          "the collar credit invariant is violated for this surface");
    }

    const std::int64_t total = shared_.classes.fetch_add(1) + 1;
    if (total > budget_.max_classes) {
      throw BudgetError("length_spectrum: class budget exceeded (limit " +
                        std::to_string(budget_.max_classes) + " classes)");
    }
    if (r11 >= run_cap_ - 8 || rmm >= run_cap_ - 8) {
      shared_.near_cap_emits.fetch_add(1);
    }
    GeodesicClass rec;
    rec.syllables = pairs_;
    rec.length = prim_len;
    rec.iterate = k;
    rec.primitive = (k == 1);
    rec.boundary = false;
    out_.push_back(std::move(rec));
  }

  const PantsGroup& G_;
  double T_;
  MobiusTransform A_, Ai_, B_, Bi_;
  MobiusTransform AB_, ABi_, BA_, BAi_;
  bool strip_lead_;
  double geom_a_;  // 1 / (lambda - 1/lambda); shear scale of A^e (0 at a cusp)
  double geom_b_;
  double cosh_prune_;
  EnumerationBudget budget_;
  int run_cap_;
  int depth_cap_;
  int workers_;
  int worker_id_;
  SharedCounters& shared_;
  PairSeq pairs_;
  CanonState canon_;
  std::vector<GeodesicClass> out_;
  std::int64_t nodes_local_ = 0;
};

int derive_run_cap(const PantsGroup& G, double T, const EnumerationBudget& budget) {
  if (budget.run_cap > 0) return budget.run_cap;
  double cap;
  if (G.l3 == 0.0) {
    // Parabolic AB: winding depth reachable below length T grows like
    // cosh(T/2)/2; keep a generous multiple of it.
    cap = std::max(256.0, std::ceil(4.0 * std::exp(0.5 * T)));
  } else {
    // Hyperbolic AB: runs already break through winding credit at length
    // (T + kCreditSlack)/l3 + 1; the cap is a slightly larger backstop.
    cap = 16.0 + std::ceil((T + kCreditSlack) / G.l3);
  }
  return static_cast<int>(std::min(cap, static_cast<double>(kMaxAutoRunCap)));
}

void append_boundary_family(std::vector<GeodesicClass>& out, double len, double T) {
  if (len <= 0.0) return;  // parabolic boundaries carry no closed geodesic
  for (int k = 1; k * len <= T + kEmitTol; ++k) {
    GeodesicClass rec;
    rec.length = len;
    rec.iterate = k;
    rec.primitive = (k == 1);
    rec.boundary = true;
    out.push_back(std::move(rec));
  }
}

bool class_order(const GeodesicClass& x, const GeodesicClass& y) {
  const double tx = x.total_length(), ty = y.total_length();
  if (tx != ty) return tx < ty;
  return x.canonical_key() < y.canonical_key();
}

}  // namespace

std::string GeodesicClass::canonical_key() const {
  char buf[64];
  if (syllables.empty()) {
    std::snprintf(buf, sizeof(buf), "boundary|%.17g|%d", length, iterate);
    return buf;
  }
  std::string key = "word";
  for (const auto& p : syllables) {
    std::snprintf(buf, sizeof(buf), "|%d:%d", p.first, p.second);
    key += buf;
  }
  return key;
}

std::vector<GeodesicClass> length_spectrum(const PantsGroup& G, double T,
                                           const EnumerationBudget& budget, int workers) {
  if (!std::isfinite(T) || T <= 0.0) {
    throw std::invalid_argument("length_spectrum: cutoff T must be finite and positive");
  }
  if (workers < 1 || workers > 64) {
    throw std::invalid_argument("length_spectrum: workers must lie in [1, 64]");
  }
  if (budget.max_classes < 1 || budget.max_nodes < 1 || budget.run_cap < 0) {
    throw std::invalid_argument("length_spectrum: budget fields must be positive");
  }

  const int run_cap = derive_run_cap(G, T, budget);
  SharedCounters shared;

  std::vector<std::vector<GeodesicClass>> results(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int id) {
    try {
      Enumerator en(G, T, budget, run_cap, workers, id, shared);
      results[static_cast<std::size_t>(id)] = en.run();
    } catch (...) {
      errors[static_cast<std::size_t>(id)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int id = 0; id < workers; ++id) threads.emplace_back(work, id);
    for (auto& t : threads) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  if (shared.near_cap_emits.load() > 0) {
    throw BudgetError(
        "length_spectrum: winding run cap saturated (classes emitted within 8 of run_cap " +
        std::to_string(run_cap) + "); raise EnumerationBudget::run_cap to guarantee coverage");
  }

  std::vector<GeodesicClass> all;
  append_boundary_family(all, G.l1, T);
  append_boundary_family(all, G.l2, T);
  append_boundary_family(all, G.l3, T);
  for (auto& part : results) {
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (static_cast<std::int64_t>(all.size()) > budget.max_classes) {
    throw BudgetError("length_spectrum: class budget exceeded (limit " +
                      std::to_string(budget.max_classes) + " classes)");
  }
  std::sort(all.begin(), all.end(), class_order);
  return all;
}

namespace {

// Letters of the rank-2 free group in exploration order a, a^-1, b, b^-1.
constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};

int letter_index(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: throw std::invalid_argument("letter_index: unknown letter");
  }
}

char inverse_letter(char c) { return kLetters[letter_index(c) ^ 1]; }

bool word_rot_less(const std::string& s, std::size_t r, const std::string& base) {
  const std::size_t m = base.size();
  for (std::size_t i = 0; i < m; ++i) {
    const int x = letter_index(s[(r + i) % m]);
    const int y = letter_index(base[i]);
    if (x != y) return x < y;
  }
  return false;
}

// Lexicographic minimum over all rotations of w and of its inverse word.
std::string canonical_word(const std::string& w) {
  std::string inv(w.rbegin(), w.rend());
  for (auto& c : inv) c = inverse_letter(c);
  std::string best = w;
  for (std::size_t r = 0; r < w.size(); ++r) {
    if (word_rot_less(w, r, best)) {
      std::string cand;
      for (std::size_t i = 0; i < w.size(); ++i) cand += w[(r + i) % w.size()];
      best = cand;
    }
    if (word_rot_less(inv, r, best)) {
      std::string cand;
      for (std::size_t i = 0; i < inv.size(); ++i) cand += inv[(r + i) % inv.size()];
      best = cand;
    }
  }
  return best;
}

std::size_t word_period(const std::string& w) {
  const std::size_t m = w.size();
  for (std::size_t p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = w[i] == w[(i + p) % m];
    if (ok) return p;
  }
  return m;
}

// Signed syllable pairs of an alternating a-leading word, or empty when the
// word is a pure power of one generator.
PairSeq word_syllables(const std::string& w) {
  std::vector<std::pair<int, int>> runs;  // (family 0/1, signed count)
  for (char c : w) {
    const int idx = letter_index(c);
    const int family = idx >> 1;
    const int sign = (idx & 1) ? -1 : 1;
    if (!runs.empty() && runs.back().first == family &&
        ((runs.back().second > 0) == (sign > 0))) {
      runs.back().second += sign;
    } else {
      runs.push_back({family, sign});
    }
  }
  PairSeq pairs;
  if (runs.size() < 2 || runs.size() % 2 != 0) return pairs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].first != static_cast<int>(i % 2)) return {};
  }
  for (std::size_t i = 0; i < runs.size(); i += 2) {
    pairs.emplace_back(runs[i].second, runs[i + 1].second);
  }
  return pairs;
}

}  // namespace

std::vector<GeodesicClass> enumerate_classes(const PantsGroup& G, int max_word_len) {
  if (max_word_len < 1 || max_word_len > 16) {
    throw std::invalid_argument("enumerate_classes: max_word_len must lie in [1, 16]");
  }
  const MobiusTransform gens[4] = {G.A, G.A.inverse(), G.B, G.B.inverse()};
  const std::string canon_a = canonical_word("a");
  const std::string canon_b = canonical_word("b");
  const std::string canon_ab = canonical_word("ab");

  std::unordered_set<std::string> seen;
  std::vector<GeodesicClass> out;

  std::string word;
  auto visit = [&](const std::string& w) {
    if (w.size() > 1 && w.front() == inverse_letter(w.back())) return;  // not cyclically reduced
    const std::string canon = canonical_word(w);
    if (!seen.insert(canon).second) return;

    const std::size_t p = word_period(canon);
    const std::string prim = canon.substr(0, p);
    MobiusTransform M = MobiusTransform::identity();
    for (char c : prim) M = M.times(gens[letter_index(c)]);
    const IsometryType type = classify(M);
    if (type == IsometryType::kIdentity) {
      throw std::domain_error("enumerate_classes: word '" + prim +
                              "' collapses to the identity; group is not free");
    }
    if (type == IsometryType::kElliptic) {
      throw std::domain_error("enumerate_classes: elliptic word '" + prim +
                              "'; group is not discrete");
    }
    GeodesicClass rec;
    rec.syllables = word_syllables(canon);
    rec.length = (type == IsometryType::kParabolic) ? 0.0 : trace_to_length(M.trace());
    rec.iterate = static_cast<int>(canon.size() / p);
    rec.primitive = (rec.iterate == 1);
    const std::string prim_canon = canonical_word(prim);
    rec.boundary = prim_canon == canon_a || prim_canon == canon_b || prim_canon == canon_ab;
    out.push_back(std::move(rec));
  };

  // Depth-first over freely reduced words.
  auto extend = [&](auto&& self) -> void {
    visit(word);
    if (static_cast<int>(word.size()) >= max_word_len) return;
    for (char c : kLetters) {
      if (!word.empty() && c == inverse_letter(word.back())) continue;
      word.push_back(c);
      self(self);
      word.pop_back();
    }
  };
  for (char c : kLetters) {
    word.assign(1, c);
    extend(extend);
  }

  std::sort(out.begin(), out.end(), class_order);
  return out;
}

}  // namespace cuspeig

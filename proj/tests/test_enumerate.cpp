#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cuspeig/enumerate.hpp"
#include "cuspeig/errors.hpp"
#include "cuspeig/pants_group.hpp"

using namespace cuspeig;

namespace {

// Multiset of (length bucket, iterate) for the non-boundary classes; the
// 1e-6 bucket is far coarser than double noise and far finer than the
// spacing of distinct lengths in these fixtures.
std::map<std::pair<long long, int>, int> word_multiset(const std::vector<GeodesicClass>& v) {
  std::map<std::pair<long long, int>, int> m;
  for (const auto& c : v) {
    if (c.boundary) continue;
    m[{std::llround(c.length * 1e6), c.iterate}]++;
  }
  return m;
}

int count_near(const std::vector<GeodesicClass>& v, double total, double tol = 1e-9) {
  int n = 0;
  for (const auto& c : v) {
    if (std::fabs(c.total_length() - total) <= tol) ++n;
  }
  return n;
}

bool has_key(const std::vector<GeodesicClass>& v, const std::string& key) {
  for (const auto& c : v) {
    if (c.canonical_key() == key) return true;
  }
  return false;
}

template <class Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("length_spectrum: argument validation") {
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);
  CHECK_THROWS_AS(length_spectrum(G, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(length_spectrum(G, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(length_spectrum(G, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(length_spectrum(G, 5.0, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(length_spectrum(G, 5.0, {}, 65), std::invalid_argument);
  EnumerationBudget bad;
  bad.max_classes = 0;
  CHECK_THROWS_AS(length_spectrum(G, 5.0, bad), std::invalid_argument);
  bad = {};
  bad.max_nodes = 0;
  CHECK_THROWS_AS(length_spectrum(G, 5.0, bad), std::invalid_argument);
  bad = {};
  bad.run_cap = -1;
  CHECK_THROWS_AS(length_spectrum(G, 5.0, bad), std::invalid_argument);

  CHECK_THROWS_AS(enumerate_classes(G, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_classes(G, 17), std::invalid_argument);
}

TEST_CASE("thrice-punctured sphere: frozen spectrum at T = 6") {
  // All three boundaries are cusps, so there are no boundary records and the
  // word traces are integers: a class with syllable pairs (e_i, f_i) has
  // trace in 2 + 4Z, and the four length bins below are 2 acosh(n) for
  // n = 3, 5, 7, 9. Counts were cross-validated against the brute-force
  // letter enumeration.
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);
  const auto spec = length_spectrum(G, 6.0);
  REQUIRE(spec.size() == 28);

  for (const auto& c : spec) {
    CHECK(!c.boundary);
    CHECK(c.iterate == 1);  // shortest length 3.52..., so no k >= 2 fits in 6
    CHECK(c.primitive);
    CHECK(!c.syllables.empty());
  }
  CHECK(count_near(spec, 3.5254943480781721009) == 3);   // 2 acosh(3)
  CHECK(count_near(spec, 4.5848633391223553756) == 6);   // 2 acosh(5)
  CHECK(count_near(spec, 5.2678315876992668345) == 9);   // 2 acosh(7)
  CHECK(count_near(spec, 5.7745419007152413700) == 10);  // 2 acosh(9)

  // Sorted ascending by (total length, canonical key).
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const double a = spec[i - 1].total_length(), b = spec[i].total_length();
    CHECK(a <= b);
    if (a == b) CHECK(spec[i - 1].canonical_key() <= spec[i].canonical_key());
  }

  // The shortest class [a b^-1] has trace 6; a cutoff just below its length
  // yields nothing, and a cutoff at the length (exact within the emission
  // tolerance) yields exactly the three trace-6 classes.
  CHECK(length_spectrum(G, 3.5254943480781721009 - 1e-6).empty());
  CHECK(length_spectrum(G, 3.5254943480781721009).size() == 3);
}

TEST_CASE("cusp winding reaches deep syllable exponents") {
  // In the thrice-punctured sphere the class A^k B has trace 2 - 4k, so its
  // length 2 acosh(2k - 1) crosses T = 12 between k = 101 and k = 102.
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);
  const auto spec = length_spectrum(G, 12.0);
  CHECK(spec.size() == 7500);  // determinism pin, validated against oracle runs

  CHECK(has_key(spec, "word|101:1"));
  CHECK(has_key(spec, "word|1:101"));
  CHECK(!has_key(spec, "word|102:1"));
  CHECK(!has_key(spec, "word|1:102"));
  CHECK(count_near(spec, 11.992891801191878955) >= 2);  // 2 acosh(201)

  double max_total = 0.0;
  for (const auto& c : spec) max_total = std::max(max_total, c.total_length());
  CHECK(max_total <= 12.0 + 1e-9);  // 2 acosh(203) = 12.0126... is excluded
}

TEST_CASE("length_spectrum matches brute-force letter enumeration") {
  // For each fixture the letter horizon L covers every class of length <= T
  // (largest word in the spectrum uses fewer letters than L), so the two
  // independent enumerations must agree exactly as multisets of
  // (primitive length, iterate).
  struct Fixture {
    double l1, l2, l3, T;
    int max_word_len;
  };
  const Fixture fixtures[] = {
      {0.0, 0.0, 0.0, 6.0, 12}, {1.0, 1.0, 0.0, 6.0, 10}, {0.8, 0.0, 2.0, 8.0, 12},
      {1.5, 0.5, 0.0, 6.0, 10}, {0.0, 0.0, 1.0, 7.0, 12},
  };
  for (const auto& fx : fixtures) {
    CAPTURE(fx.l1);
    CAPTURE(fx.l2);
    CAPTURE(fx.l3);
    const PantsGroup G = pants_group(fx.l1, fx.l2, fx.l3);
    const auto spec = word_multiset(length_spectrum(G, fx.T));

    std::map<std::pair<long long, int>, int> oracle;
    int max_letters = 0;
    for (const auto& c : enumerate_classes(G, fx.max_word_len)) {
      if (c.boundary || c.length <= 0.0) continue;
      if (c.total_length() > fx.T + 1e-9) continue;
      oracle[{std::llround(c.length * 1e6), c.iterate}]++;
    }
    CHECK(spec == oracle);

    // Horizon sanity: the longest word the spectrum produced fits well
    // within the oracle's letter budget, so the comparison is two-sided.
    const auto classes = length_spectrum(G, fx.T);
    for (const auto& c : classes) {
      int letters = 0;
      for (const auto& p : c.syllables) letters += std::abs(p.first) + std::abs(p.second);
      max_letters = std::max(max_letters, letters);
    }
    CHECK(max_letters < fx.max_word_len);
  }
}

TEST_CASE("boundary geodesic families") {
  // Hyperbolic boundaries contribute [A^k], [B^k], [(AB)^k] analytically with
  // the requested lengths; cusps contribute nothing.
  const PantsGroup G1 = pants_group(1.0, 1.0, 0.0);
  const auto s1 = length_spectrum(G1, 6.0);
  std::vector<GeodesicClass> b1;
  for (const auto& c : s1) {
    if (c.boundary) b1.push_back(c);
  }
  REQUIRE(b1.size() == 12);  // k = 1..6 for each of the two length-1 cuffs
  for (int k = 1; k <= 6; ++k) {
    int n = 0;
    for (const auto& c : b1) {
      if (c.iterate != k) continue;
      ++n;
      CHECK(c.length == 1.0);
      CHECK(c.primitive == (k == 1));
      CHECK(c.syllables.empty());
    }
    CHECK(n == 2);
  }

  const PantsGroup G2 = pants_group(0.8, 0.0, 2.0);
  const auto s2 = length_spectrum(G2, 8.0);
  int n_cuff = 0, n_ab = 0, n_other = 0;
  for (const auto& c : s2) {
    if (!c.boundary) continue;
    if (c.length == 0.8) {
      ++n_cuff;
      CHECK(c.iterate <= 10);  // 10 * 0.8 = 8.0 <= T
    } else if (c.length == 2.0) {
      ++n_ab;
      CHECK(c.iterate <= 4);
    } else {
      ++n_other;
    }
  }
  CHECK(n_cuff == 10);
  CHECK(n_ab == 4);
  CHECK(n_other == 0);
}

TEST_CASE("iterates carry the primitive length") {
  const PantsGroup G = pants_group(1.0, 1.0, 0.0);
  const auto spec = length_spectrum(G, 8.0);

  const GeodesicClass* prim = nullptr;
  const GeodesicClass* square = nullptr;
  const std::vector<std::pair<int, int>> one{{1, -1}};
  const std::vector<std::pair<int, int>> two{{1, -1}, {1, -1}};
  for (const auto& c : spec) {
    if (c.syllables == one) prim = &c;
    if (c.syllables == two) square = &c;
  }
  REQUIRE(prim != nullptr);
  REQUIRE(square != nullptr);
  CHECK(prim->iterate == 1);
  CHECK(prim->primitive);
  CHECK(square->iterate == 2);
  CHECK(!square->primitive);
  CHECK(square->length == doctest::Approx(prim->length).epsilon(1e-12));
  CHECK(square->total_length() == doctest::Approx(2.0 * prim->length).epsilon(1e-12));
}

TEST_CASE("deterministic across worker counts") {
  const PantsGroup shapes[] = {pants_group(1.0, 1.0, 0.0), pants_group(0.0, 0.0, 0.5)};
  const double cutoffs[] = {10.0, 8.0};
  for (int i = 0; i < 2; ++i) {
    const auto ref = length_spectrum(shapes[i], cutoffs[i], {}, 1);
    for (int workers : {2, 8}) {
      const auto alt = length_spectrum(shapes[i], cutoffs[i], {}, workers);
      REQUIRE(alt.size() == ref.size());
      for (std::size_t j = 0; j < ref.size(); ++j) {
        CHECK(alt[j].syllables == ref[j].syllables);
        CHECK(alt[j].length == ref[j].length);  // bitwise: same arithmetic path
        CHECK(alt[j].iterate == ref[j].iterate);
        CHECK(alt[j].primitive == ref[j].primitive);
        CHECK(alt[j].boundary == ref[j].boundary);
        CHECK(alt[j].canonical_key() == ref[j].canonical_key());
      }
    }
  }
}

TEST_CASE("cutoff consistency: smaller T is a prefix filter of larger T") {
  const PantsGroup G = pants_group(1.0, 1.0, 0.0);
  const auto small = length_spectrum(G, 6.0);
  const auto large = length_spectrum(G, 8.0);
  std::vector<GeodesicClass> filtered;
  for (const auto& c : large) {
    if (c.total_length() <= 6.0 + 1e-9) filtered.push_back(c);
  }
  REQUIRE(filtered.size() == small.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(filtered[i].canonical_key() == small[i].canonical_key());
    CHECK(filtered[i].length == small[i].length);
    CHECK(filtered[i].iterate == small[i].iterate);
  }
}

TEST_CASE("budget exhaustion reports which budget tripped") {
  const PantsGroup G = pants_group(0.0, 0.0, 0.0);

  EnumerationBudget tiny_classes;
  tiny_classes.max_classes = 5;
  CHECK_THROWS_AS(length_spectrum(G, 6.0, tiny_classes), BudgetError);
  CHECK(message_of([&] { length_spectrum(G, 6.0, tiny_classes); })
            .find("class budget") != std::string::npos);

  EnumerationBudget tiny_nodes;
  tiny_nodes.max_nodes = 10;
  CHECK_THROWS_AS(length_spectrum(G, 6.0, tiny_nodes), BudgetError);
  CHECK(message_of([&] { length_spectrum(G, 6.0, tiny_nodes); }).find("node budget") !=
        std::string::npos);

  // A run cap small enough that classes are emitted within its safety window
  // must refuse (saturation) rather than silently truncate the spectrum.
  EnumerationBudget tight_cap;
  tight_cap.run_cap = 9;
  CHECK_THROWS_AS(length_spectrum(G, 6.0, tight_cap), BudgetError);
  CHECK(message_of([&] { length_spectrum(G, 6.0, tight_cap); }).find("saturated") !=
        std::string::npos);

  // A comfortable explicit cap reproduces the default-budget spectrum.
  EnumerationBudget wide_cap;
  wide_cap.run_cap = 64;
  const auto spec = length_spectrum(G, 6.0, wide_cap);
  CHECK(spec.size() == 28);
}

TEST_CASE("dynamic-range refusal instead of silent mispruning") {
  // Both cuffs at the maximum length: word entries overflow the trustworthy
  // pruning range well before T = 16, and the enumerator must refuse.
  const PantsGroup G = pants_group(7.3, 7.3, 0.0);
  CHECK_THROWS_AS(length_spectrum(G, 16.0), PrecisionError);
  // A short cutoff on the same surface still works.
  CHECK_NOTHROW(length_spectrum(G, 10.0));
}

TEST_CASE("enumerate_classes: small word-length contracts") {
  const PantsGroup G = pants_group(1.0, 1.0, 0.0);

  const auto len1 = enumerate_classes(G, 1);
  REQUIRE(len1.size() == 2);  // [a] and [b]; inverses are merged
  for (const auto& c : len1) {
    CHECK(c.boundary);
    CHECK(c.primitive);
    CHECK(c.iterate == 1);
    CHECK(c.length == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto len2 = enumerate_classes(G, 2);
  REQUIRE(len2.size() == 6);  // [a], [b], [a^2], [b^2], [ab], [a b^-1]
  int n_parabolic = 0, n_square = 0, n_word = 0;
  for (const auto& c : len2) {
    if (c.length == 0.0) {
      ++n_parabolic;  // [ab]: the cusp boundary
      CHECK(c.boundary);
    }
    if (c.iterate == 2) {
      ++n_square;
      CHECK(!c.primitive);
      CHECK(c.boundary);
      CHECK(c.total_length() == doctest::Approx(2.0).epsilon(1e-12));
    }
    if (!c.boundary) {
      ++n_word;  // [a b^-1] is the only non-boundary class of <= 2 letters
      CHECK(c.length > 0.0);
    }
  }
  CHECK(n_parabolic == 1);
  CHECK(n_square == 2);
  CHECK(n_word == 1);

  // Thrice-punctured sphere: the only non-boundary two-letter class is
  // [a b^-1] with trace 6.
  const PantsGroup G0 = pants_group(0.0, 0.0, 0.0);
  const auto c0 = enumerate_classes(G0, 2);
  int n_hyp = 0;
  for (const auto& c : c0) {
    if (c.length <= 0.0) continue;
    ++n_hyp;
    CHECK(c.length == doctest::Approx(3.5254943480781721009).epsilon(1e-14));
    CHECK(!c.boundary);
  }
  CHECK(n_hyp == 1);
}

TEST_CASE("canonical keys are unique per class") {
  for (const auto& args : {std::pair{pants_group(0.0, 0.0, 1.0), 7.0},
                           std::pair{pants_group(0.8, 0.0, 2.0), 8.0}}) {
    const auto spec = length_spectrum(args.first, args.second);
    std::set<std::string> keys;
    for (const auto& c : spec) keys.insert(c.canonical_key());
    CHECK(keys.size() == spec.size());  // boundary keys embed length+iterate
  }
}

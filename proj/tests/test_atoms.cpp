#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcm/atoms.hpp"

using namespace pcm;

namespace {
Rational q(const char* s) { return parse_rational(s); }
using RA = Atom<Rational>;

// brute-force oracle: every word of length n, image pushed through closed pieces
std::vector<RA> brute_atoms(const PAMap& m, std::size_t n) {
  std::vector<RA> cur{RA{{}, {m.lo(), m.hi()}}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<RA> next;
    for (const auto& a : cur)
      for (std::size_t i = 1; i <= m.pieces(); ++i) {
        Rational lo = std::max(a.iv.lo, m.breakpoint(i - 1));
        Rational hi = std::min(a.iv.hi, m.breakpoint(i));
        if (lo > hi) continue;
        if (lo == hi && ((i > 1 && lo == m.breakpoint(i - 1)) || (i < m.pieces() && lo == m.breakpoint(i)))) continue;
        RA b{a.word, {m.branch(i)(lo), m.branch(i)(hi)}};
        b.word.push_back(static_cast<Symbol>(i));
        next.push_back(b);
      }
    cur = next;
  }
  std::sort(cur.begin(), cur.end(), [](const RA& x, const RA& y) { return x.iv.lo < y.iv.lo; });
  return cur;
}
}  // namespace

TEST_CASE("atoms of base(1/2,3/5)") {
  PAMap m = build_base_map(q("1/2"), q("3/5"));
  MapSystem<Rational> sys{&m};
  auto a1 = atoms(sys, 1);
  REQUIRE(a1.size() == 2);
  CHECK(a1[0].word == Word{2});
  CHECK(a1[0].iv == Interval<Rational>{0, q("1/10")});
  CHECK(a1[1].word == Word{1});
  CHECK(a1[1].iv == Interval<Rational>{q("3/5"), 1});

  auto a2 = atoms(sys, 2);
  REQUIRE(a2.size() == 3);
  CHECK(a2[0].word == Word{1, 2});
  CHECK(a2[0].iv == Interval<Rational>{0, q("1/10")});
  CHECK(a2[1].word == Word{2, 1});
  CHECK(a2[1].iv == Interval<Rational>{q("3/5"), q("13/20")});
  CHECK(a2[2].word == Word{1, 1});
  CHECK(a2[2].iv == Interval<Rational>{q("9/10"), 1});
}

TEST_CASE("atoms match brute force") {
  for (auto [l, u] : {std::pair{"1/2", "3/5"}, {"1/2", "4/5"}, {"2/3", "1/2"}, {"3/4", "2/5"}}) {
    PAMap m = build_base_map(q(l), q(u));
    MapSystem<Rational> sys{&m};
    for (std::size_t n = 1; n <= 8; ++n) {
      auto a = atoms(sys, n);
      auto b = brute_atoms(m, n);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].word == b[k].word);
        CHECK(a[k].iv == b[k].iv);
      }
    }
  }
}

TEST_CASE("n = 1 gives N atoms and the budget is enforced") {
  PAMap m = build_base_map(q("2/3"), q("1/2"));
  MapSystem<Rational> sys{&m};
  CHECK(atoms(sys, 1).size() == 2);
  CHECK_THROWS_AS(atoms(sys, 6, 3), BudgetExceeded);
}

TEST_CASE("check_disjoint") {
  PAMap m = build_base_map(q("1/2"), q("3/5"));
  MapSystem<Rational> sys{&m};
  auto a = atoms(sys, 1);
  CHECK_FALSE(check_disjoint(sys, a).has_value());
  a.push_back(a[0]);
  auto w = check_disjoint(sys, a);
  REQUIRE(w.has_value());
  CHECK(a[w->first].iv == a[w->second].iv);

  PAMap twin({0, q("1/2"), 1}, {{q("1/2"), 0}, {q("1/2"), 0}}, {});
  MapSystem<Rational> st{&twin};
  CHECK(check_disjoint(st, atoms(st, 1)).has_value());
}

TEST_CASE("lambda_n") {
  PAMap m = build_base_map(q("1/2"), q("3/5"));
  MapSystem<Rational> sys{&m};
  auto l1 = lambda_n(sys, 1);
  REQUIRE(l1.intervals.size() == 2);
  CHECK(l1.intervals[0] == Interval<Rational>{0, q("1/10")});
  CHECK(l1.intervals[1] == Interval<Rational>{q("3/5"), 1});
  REQUIRE(l1.gaps.size() == 1);
  CHECK(l1.gaps[0] == Interval<Rational>{q("1/10"), q("3/5")});
  auto l0 = lambda_n(sys, 0);
  REQUIRE(l0.intervals.size() == 1);
  CHECK(l0.intervals[0] == Interval<Rational>{0, 1});
  CHECK(l0.gaps.empty());
  auto l2 = lambda_n(sys, 2);
  for (const auto& iv : l2.intervals) {
    bool inside = false;
    for (const auto& o : l1.intervals) inside |= o.lo <= iv.lo && iv.hi <= o.hi;
    CHECK(inside);
  }
}

TEST_CASE("gaps_base") {
  PAMap m = build_base_map(q("1/2"), q("3/5"));
  auto h = gaps_base(m, 1);
  REQUIRE(h.size() == 1);
  CHECK(h[0] == Interval<Rational>{q("1/10"), q("3/5")});
  try {
    gaps_base(m, 2);
    FAIL("expected CViolation");
  } catch (const CViolation& e) {
    CHECK(e.k() == 1);
  }
  try {
    gaps_base(build_base_map(q("1/2"), q("4/5")), 1);
    FAIL("expected CViolation");
  } catch (const CViolation& e) {
    CHECK(e.k() == 0);
  }
}

TEST_CASE("verify_no_periodic") {
  auto r0 = verify_no_periodic(q("1/2"), q("4/5"), 10);
  CHECK_FALSE(r0.pass);
  CHECK(r0.k == 0);
  CHECK(r0.left == q("3/10"));
  CHECK(r0.right == q("4/5"));
  CHECK(r0.c == q("2/5"));
  auto r1 = verify_no_periodic(q("1/2"), q("3/5"), 10);
  CHECK_FALSE(r1.pass);
  CHECK(r1.k == 1);
  CHECK(r1.left == q("13/20"));
  CHECK(r1.right == q("9/10"));
  CHECK_THROWS_AS(verify_no_periodic(q("1/2"), q("1/2"), 10), ParameterOutOfRange);
}

TEST_CASE("lr evidence") {
  // fixed point 0 of the first branch
  PAMap m({0, q("1/2"), 1}, {{q("1/2"), 0}, {q("1/2"), q("1/2")}}, {});
  MapSystem<Rational> sys{&m};
  MapDynamics<Rational> dyn{&m};
  auto ev = lr_visits(sys, dyn, Rational(0), 100, 10);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].left_hits.empty());
  CHECK(ev[0].right_hits.empty());
  CHECK(ev[0].max_n_witnessed == 0);

  // an orbit kept at distance >= 1/10 from c is witnessed to at most level 3 (lambda = 1/2)
  PAMap b = build_base_map(q("1/2"), q("4/5"));
  MapSystem<Rational> sb{&b};
  MapDynamics<Rational> db{&b};
  auto e2 = lr_visits(sb, db, Rational(0), 200, 20);
  Rational closest = 1;
  itinerary(db, Rational(0), 200, "", [&](std::size_t, const Rational& x) {
    Rational d = abs(x - b.breakpoint(1));
    if (d < closest) closest = d;
  });
  std::size_t bound = 0;
  for (Rational w = q("1/2"); w > closest; w /= 2) ++bound;
  CHECK(e2[0].max_n_witnessed <= bound);
  for (auto [t, lvl] : e2[0].left_hits) CHECK(lvl >= 1);
}

TEST_CASE("complexity_from_atoms equals word counts") {
  PAMap b = build_base_map(q("1/2"), q("4/5"));
  MapSystem<Rational> sys{&b};
  MapDynamics<Rational> dyn{&b};
  auto it = itinerary(dyn, Rational(0), 100);
  auto t = complexity(it, 6);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(complexity_from_atoms(sys, dyn, Rational(0), 100, n) == t.p(n));

  // orbit confined to one piece
  PAMap f({0, q("1/2"), 1}, {{q("1/2"), 0}, {q("1/2"), q("1/2")}}, {});
  MapSystem<Rational> sf{&f};
  MapDynamics<Rational> df{&f};
  CHECK(complexity_from_atoms(sf, df, Rational(0), 50, 1) == 1);
}

TEST_CASE("n0_bound") {
  PAMap b = build_base_map(q("1/2"), q("3/5"));
  MapSystem<Rational> sb{&b};
  CHECK(n0_bound(sb) == 1);
  PAMap bad({0, q("2/5"), q("3/5"), 1}, {{q("1/10"), 0}, {q("1/10"), q("43/50")}, {q("9/10"), q("-6/25")}}, {});
  CHECK(validate_map(bad).ok());
  MapSystem<Rational> s3{&bad};
  CHECK(n0_bound(s3) > 1);
}

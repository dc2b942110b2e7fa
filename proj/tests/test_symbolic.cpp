#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcm/pamap.hpp"
#include "pcm/symbolic.hpp"

using namespace pcm;

namespace {
Rational q(const char* s) { return parse_rational(s); }

std::vector<Symbol> fibonacci(std::size_t T) {
  std::vector<Symbol> w{1};
  while (w.size() < T) {
    std::vector<Symbol> n;
    for (Symbol s : w) {
      if (s == 1) {
        n.push_back(1);
        n.push_back(2);
      } else {
        n.push_back(1);
      }
    }
    w = std::move(n);
  }
  w.resize(T);
  return w;
}

std::vector<std::uint64_t> brute(const std::vector<Symbol>& s, std::size_t n_max) {
  std::vector<std::uint64_t> out;
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back(word_set(s, n).size());
  return out;
}

ComplexityTable table(std::vector<std::uint64_t> p) {
  ComplexityTable t;
  t.T = 1000;
  t.counts = p;
  t.half = p;
  t.stabilized_up_to = p.size();
  return t;
}
}  // namespace

TEST_CASE("itinerary examples") {
  PAMap a = build_base_map(q("1/2"), q("4/5"));
  MapDynamics<Rational> da{&a};
  auto it = itinerary(da, Rational(0), 4);
  CHECK(it.symbols == std::vector<Symbol>{1, 2, 1, 2});
  CHECK(it.truncation == Truncation::horizon);

  std::vector<Rational> orbit;
  itinerary(da, Rational(0), 3, "", [&](std::size_t, const Rational& x) { orbit.push_back(x); });
  CHECK(orbit == std::vector<Rational>{0, q("4/5"), q("1/5"), q("9/10")});

  auto hit = itinerary(da, a.breakpoint(1), 1);
  CHECK(hit.symbols.empty());
  CHECK(hit.truncation == Truncation::boundary_hit);
  CHECK(hit.boundary_time == 0);

  PAMap b = build_base_map(q("1/2"), q("3/5"));
  MapDynamics<Rational> db{&b};
  CHECK(itinerary(db, Rational(0), 3).symbols == std::vector<Symbol>{1, 1, 2});
}

TEST_CASE("complexity examples") {
  std::vector<Symbol> ones(100, 1), alt;
  for (int i = 0; i < 100; ++i) alt.push_back(static_cast<Symbol>(1 + i % 2));
  auto c1 = complexity(ones, 5);
  CHECK(c1.counts == std::vector<std::uint64_t>(5, 1));
  CHECK(complexity(alt, 5).counts == std::vector<std::uint64_t>(5, 2));

  auto fib = fibonacci(1000);
  auto cf = complexity(fib, 20);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(cf.p(n) == n + 1);
  CHECK(cf.stabilized_up_to == 20);
  CHECK_THROWS_AS(complexity(fib, 1001), PrefixTooShort);
}

TEST_CASE("factor counts agree with brute force") {
  std::uint64_t state = 12345;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Symbol> s;
    std::size_t len = 50 + trial * 7;
    for (std::size_t i = 0; i < len; ++i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      s.push_back(static_cast<Symbol>(1 + (state >> 33) % (1 + trial % 3)));
    }
    CHECK(factor_counts(s, 12) == brute(s, 12));
  }
}

TEST_CASE("table invariants on a Sturmian word") {
  auto fib = fibonacci(4000);
  auto t = complexity(fib, 60);
  for (std::size_t n = 1; n < t.n_max(); ++n) {
    CHECK(t.p(n) <= t.p(n + 1));
    CHECK(t.p(n + 1) <= 2 * t.p(n));
    CHECK(t.half[n - 1] <= t.counts[n - 1]);
  }
}

TEST_CASE("fit_affine examples") {
  auto f1 = fit_affine(table({2, 3, 4, 5, 6, 7}));
  REQUIRE(f1);
  CHECK(f1->alpha == 1);
  CHECK(f1->beta == 1);
  CHECK(f1->m0 == 1);
  auto f0 = fit_affine(table({1, 1, 1, 1, 1}));
  REQUIRE(f0);
  CHECK(f0->alpha == 0);
  CHECK(f0->beta == 1);
  CHECK(f0->m0 == 1);
  auto f2 = fit_affine(table({3, 5, 7, 9, 11}));
  REQUIRE(f2);
  CHECK(f2->alpha == 2);
  CHECK(f2->beta == 1);
  CHECK(f2->m0 == 1);
  // transient before the affine tail
  auto f3 = fit_affine(table({2, 4, 5, 6, 7, 8}));
  REQUIRE(f3);
  CHECK(f3->alpha == 1);
  CHECK(f3->beta == 2);
  CHECK(f3->m0 == 2);
  CHECK_FALSE(fit_affine(table({1, 2})).has_value());
  CHECK_FALSE(fit_affine(table({1, 2, 4, 8})).has_value());
}

TEST_CASE("word_set examples") {
  std::vector<Symbol> alt, ones(10, 1), per3;
  for (int i = 0; i < 10; ++i) alt.push_back(static_cast<Symbol>(1 + i % 2));
  for (int i = 0; i < 12; ++i) per3.push_back(i % 3 == 2 ? 2 : 1);
  CHECK(word_set(alt, 2) == std::set<Word>{{1, 2}, {2, 1}});
  CHECK(word_set(ones, 3) == std::set<Word>{{1, 1, 1}});
  CHECK(word_set(per3, 2) == std::set<Word>{{1, 1}, {1, 2}, {2, 1}});
  CHECK_THROWS_AS(word_set(ones, 11), PrefixTooShort);
  CHECK(to_string(Word{1, 2, 1}) == "121");
}

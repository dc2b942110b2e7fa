#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcm/errors.hpp"

namespace pcm {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

// "1212" when every symbol is a single digit, otherwise comma separated
std::string to_string(const Word& w);

enum class Truncation { horizon, boundary_hit };

struct Itinerary {
  std::vector<Symbol> symbols;
  std::string seed;
  std::size_t requested = 0;
  Truncation truncation = Truncation::horizon;
  std::size_t boundary_time = 0;  // meaningful for boundary_hit

  std::size_t size() const { return symbols.size(); }
};

// Walks the orbit of x.  dyn needs symbol(p) -> optional piece and
// step(p, piece) -> next point.  visit(t, p) sees every computed orbit point,
// f^t(x) for t = 0..T when the orbit stays off the discontinuities.
template <class D, class Visit>
Itinerary itinerary(const D& dyn, typename D::point_type x, std::size_t T, std::string seed, Visit&& visit) {
  Itinerary it;
  it.seed = std::move(seed);
  it.requested = T;
  it.symbols.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    visit(t, static_cast<const typename D::point_type&>(x));
    std::optional<std::size_t> s = dyn.symbol(x);
    if (!s) {
      it.truncation = Truncation::boundary_hit;
      it.boundary_time = t;
      return it;
    }
    it.symbols.push_back(static_cast<Symbol>(*s));
    x = dyn.step(x, *s);
  }
  visit(T, static_cast<const typename D::point_type&>(x));
  return it;
}

template <class D>
Itinerary itinerary(const D& dyn, typename D::point_type x, std::size_t T, std::string seed = "") {
  return itinerary(dyn, std::move(x), T, std::move(seed), [](std::size_t, const auto&) {});
}

// counts[n-1] = number of distinct length-n factors, n = 1..n_max (suffix automaton)
std::vector<std::uint64_t> factor_counts(std::span<const Symbol> s, std::size_t n_max);

struct ComplexityTable {
  std::size_t T = 0;
  std::vector<std::uint64_t> counts;  // counts[n-1] = p_T(n)
  std::vector<std::uint64_t> half;    // same over the prefix of length T/2
  std::size_t stabilized_up_to = 0;

  std::size_t n_max() const { return counts.size(); }
  std::uint64_t p(std::size_t n) const { return counts.at(n - 1); }
};

ComplexityTable complexity(std::span<const Symbol> s, std::size_t n_max);
inline ComplexityTable complexity(const Itinerary& it, std::size_t n_max) {
  return complexity(std::span<const Symbol>(it.symbols), n_max);
}

struct AffineFit {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
  std::size_t m0 = 0;
  std::size_t last = 0;  // verified range is [m0, last]
};

// nullopt means NotStabilized
std::optional<AffineFit> fit_affine(const ComplexityTable& t);

std::set<Word> word_set(std::span<const Symbol> s, std::size_t n);
inline std::set<Word> word_set(const Itinerary& it, std::size_t n) {
  return word_set(std::span<const Symbol>(it.symbols), n);
}

}  // namespace pcm

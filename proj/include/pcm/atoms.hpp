#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcm/errors.hpp"
#include "pcm/pamap.hpp"
#include "pcm/symbolic.hpp"

namespace pcm {

// A "system" is the ordered phase space plus branch extensions:
//   pieces(), breakpoint(i) for i = 0..N, compare(a, b),
//   extend(piece, x) for x in the closed piece (one-sided limits at its ends),
//   within(x, d, k): |x - d| < k * diam(X),  lambda(): contraction factor.
// MapSystem adapts a BasicPAMap; the constructor module provides the tagged one.
template <class S>
struct MapSystem {
  using point_type = S;
  const BasicPAMap<S>* map;

  std::size_t pieces() const { return map->pieces(); }
  const S& breakpoint(std::size_t i) const { return map->breakpoint(i); }
  std::strong_ordering compare(const S& a, const S& b) const { return order(a, b); }
  S extend(std::size_t piece, const S& x) const { return map->branch(piece)(x); }
  Rational lambda() const { return map->max_slope(); }
  bool within(const S& x, const S& d, const Rational& k) const {
    S r = (map->hi() - map->lo()) * k;
    S diff = x - d;
    return diff < r && -diff < r;
  }
};

template <class P>
struct Atom {
  Word word;
  Interval<P> iv;
  std::size_t generation() const { return word.size(); }
};

constexpr std::size_t default_budget = 1000000;

template <class Sys>
bool less(const Sys& sys, const typename Sys::point_type& a, const typename Sys::point_type& b) {
  return sys.compare(a, b) == std::strong_ordering::less;
}

template <class Sys>
bool same(const Sys& sys, const typename Sys::point_type& a, const typename Sys::point_type& b) {
  return sys.compare(a, b) == std::strong_ordering::equal;
}

template <class Sys>
void sort_atoms(const Sys& sys, std::vector<Atom<typename Sys::point_type>>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [&](const auto& x, const auto& y) { return less(sys, x.iv.lo, y.iv.lo); });
}

// F_i(A) for every piece i; empty intersections are pruned.
template <class Sys>
std::vector<Atom<typename Sys::point_type>> next_generation(const Sys& sys,
                                                            const std::vector<Atom<typename Sys::point_type>>& gen,
                                                            std::size_t budget = default_budget) {
  using P = typename Sys::point_type;
  const std::size_t N = sys.pieces();
  std::vector<Atom<P>> out;
  std::size_t touched = 0;
  for (const auto& a : gen) {
    for (std::size_t i = 1; i <= N; ++i) {
      if (++touched > budget) throw BudgetExceeded("atom budget of " + std::to_string(budget) + " exceeded");
      const P& b0 = sys.breakpoint(i - 1);
      const P& b1 = sys.breakpoint(i);
      const P& lo = less(sys, a.iv.lo, b0) ? b0 : a.iv.lo;
      const P& hi = less(sys, b1, a.iv.hi) ? b1 : a.iv.hi;
      auto c = sys.compare(lo, hi);
      if (c == std::strong_ordering::greater) continue;
      if (c == std::strong_ordering::equal) {
        // a single point belongs to X_i only off the interior breakpoints
        bool inside = (less(sys, b0, lo) && less(sys, lo, b1)) || (i == 1 && same(sys, lo, b0)) ||
                      (i == N && same(sys, lo, b1));
        if (!inside) continue;
      }
      Atom<P> next{a.word, {sys.extend(i, lo), sys.extend(i, hi)}};
      next.word.push_back(static_cast<Symbol>(i));
      out.push_back(std::move(next));
    }
  }
  sort_atoms(sys, out);
  return out;
}

template <class Sys>
std::vector<Atom<typename Sys::point_type>> atoms(const Sys& sys, std::size_t n, std::size_t budget = default_budget) {
  using P = typename Sys::point_type;
  std::vector<Atom<P>> gen{Atom<P>{{}, {sys.breakpoint(0), sys.breakpoint(sys.pieces())}}};
  for (std::size_t k = 0; k < n; ++k) gen = next_generation(sys, gen, budget);
  return gen;
}

// pairwise disjointness; witness indices refer to the input order
template <class Sys>
std::optional<std::pair<std::size_t, std::size_t>> check_disjoint(const Sys& sys,
                                                                  const std::vector<Atom<typename Sys::point_type>>& a) {
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return less(sys, a[x].iv.lo, a[y].iv.lo); });
  for (std::size_t k = 1; k < idx.size(); ++k)
    if (!less(sys, a[idx[k - 1]].iv.hi, a[idx[k]].iv.lo)) return std::pair{idx[k - 1], idx[k]};
  return std::nullopt;
}

template <class P>
struct AttractorApprox {
  std::size_t generation = 0;
  std::vector<Interval<P>> intervals;  // closed, disjoint, ordered
  std::vector<Interval<P>> gaps;       // open complementary intervals inside [c_0, c_N]
};

template <class Sys>
AttractorApprox<typename Sys::point_type> union_of(const Sys& sys, const std::vector<Atom<typename Sys::point_type>>& a,
                                                   std::size_t generation) {
  using P = typename Sys::point_type;
  AttractorApprox<P> out;
  out.generation = generation;
  std::vector<Interval<P>> ivs;
  for (const auto& x : a) ivs.push_back(x.iv);
  std::sort(ivs.begin(), ivs.end(), [&](const auto& x, const auto& y) { return less(sys, x.lo, y.lo); });
  for (auto& iv : ivs) {
    if (!out.intervals.empty() && !less(sys, out.intervals.back().hi, iv.lo)) {
      if (less(sys, out.intervals.back().hi, iv.hi)) out.intervals.back().hi = iv.hi;
    } else {
      out.intervals.push_back(iv);
    }
  }
  const P& c0 = sys.breakpoint(0);
  const P& cN = sys.breakpoint(sys.pieces());
  if (!out.intervals.empty() && less(sys, c0, out.intervals.front().lo)) out.gaps.push_back({c0, out.intervals.front().lo});
  for (std::size_t k = 1; k < out.intervals.size(); ++k)
    out.gaps.push_back({out.intervals[k - 1].hi, out.intervals[k].lo});
  if (!out.intervals.empty() && less(sys, out.intervals.back().hi, cN)) out.gaps.push_back({out.intervals.back().hi, cN});
  return out;
}

template <class Sys>
AttractorApprox<typename Sys::point_type> lambda_n(const Sys& sys, std::size_t n, std::size_t budget = default_budget) {
  return union_of(sys, atoms(sys, n, budget), n);
}

// index of the atom containing x (atoms sorted and disjoint)
template <class Sys>
std::optional<std::size_t> locate(const Sys& sys, const std::vector<Atom<typename Sys::point_type>>& a,
                                  const typename Sys::point_type& x) {
  std::size_t lo = 0, hi = a.size();  // first atom with x < lo
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (less(sys, x, a[mid].iv.lo)) hi = mid;
    else lo = mid + 1;
  }
  if (lo == 0) return std::nullopt;
  if (less(sys, a[lo - 1].iv.hi, x)) return std::nullopt;
  return lo - 1;
}

// H_k = (f^{k+1}(1), f^{k+1}(0)); CViolation(k) at the first k with c in closure(H_k)
template <class S>
std::vector<Interval<S>> gaps_base(const BasicPAMap<S>& m, std::size_t n) {
  if (m.pieces() != 2) throw std::invalid_argument("gaps_base needs a 2-piece map");
  const S& c = m.breakpoint(1);
  S zero = m.branch(2)(c), f1 = m.branch(2)(m.hi()), f0 = m.branch(1)(m.lo()), one = m.branch(1)(c);
  if (!(zero == m.lo() && one == m.hi() && zero < f1 && f1 < f0 && f0 < one))
    throw std::invalid_argument("gaps_base needs 0 = f2(c) < f2(1) < f1(0) < f1(c) = 1");
  std::vector<Interval<S>> out;
  S a = f1, b = f0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(c < a) && !(b < c)) throw CViolation(k);
    out.push_back({a, b});
    a = m.branch(a < c ? 1 : 2)(a);
    b = m.branch(b < c ? 1 : 2)(b);
  }
  return out;
}

template <class S>
struct VerifyResult {
  bool pass = false;
  std::size_t k = 0;  // horizon on Pass, rejection index on Reject
  S left, right, c;   // H_k endpoints on Reject
};

// Prop. PRC1 finite-horizon test, k = 0..K
template <class S>
VerifyResult<S> verify_no_periodic(const BasicPAMap<S>& m, std::size_t K) {
  const S& c = m.breakpoint(1);
  S a = m.branch(2)(m.hi()), b = m.branch(1)(m.lo());
  for (std::size_t k = 0; k <= K; ++k) {
    if (!(c < a) && !(b < c)) return VerifyResult<S>{false, k, a, b, c};
    a = m.branch(a < c ? 1 : 2)(a);
    b = m.branch(b < c ? 1 : 2)(b);
  }
  return VerifyResult<S>{true, K, S{}, S{}, c};
}

VerifyResult<Rational> verify_no_periodic(const Rational& lambda, const Rational& mu, std::size_t K);

struct LrEvidence {
  std::size_t index = 0;  // discontinuity c_index
  std::vector<std::pair<std::size_t, std::size_t>> left_hits, right_hits;  // (time, window level n)
  std::size_t max_n_witnessed = 0;
};

// Streams orbit points; a hit at level n means |x - c| < lambda^n diam(X).
// Only record-breaking hits per side are kept.
template <class Sys>
class LrTracker {
 public:
  LrTracker(const Sys& sys, std::size_t n_max) : sys_(sys), n_max_(n_max) {
    Rational l = sys.lambda();
    Rational w = 1;
    for (std::size_t n = 0; n <= n_max; ++n, w *= l) windows_.push_back(w);
    for (std::size_t i = 1; i < sys.pieces(); ++i) ev_.push_back(LrEvidence{i, {}, {}, 0});
  }

  void observe(std::size_t t, const typename Sys::point_type& x) {
    for (auto& e : ev_) {
      const auto& d = sys_.breakpoint(e.index);
      auto c = sys_.compare(x, d);
      if (c == std::strong_ordering::equal) continue;
      auto& hits = c == std::strong_ordering::less ? e.left_hits : e.right_hits;
      std::size_t best = hits.empty() ? 0 : hits.back().second;
      std::size_t lvl = best;
      while (lvl < n_max_ && sys_.within(x, d, windows_[lvl + 1])) ++lvl;
      if (lvl > best) hits.emplace_back(t, lvl);
    }
  }

  std::vector<LrEvidence> evidence() const {
    auto out = ev_;
    for (auto& e : out) {
      std::size_t l = e.left_hits.empty() ? 0 : e.left_hits.back().second;
      std::size_t r = e.right_hits.empty() ? 0 : e.right_hits.back().second;
      e.max_n_witnessed = std::min(l, r);
    }
    return out;
  }

 private:
  const Sys& sys_;
  std::size_t n_max_;
  std::vector<Rational> windows_;
  std::vector<LrEvidence> ev_;
};

// number of discontinuities witnessed on both sides at window level >= n
inline std::size_t witnessed_count(const std::vector<LrEvidence>& ev, std::size_t n) {
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](const LrEvidence& e) { return e.max_n_witnessed >= n; }));
}

template <class Sys, class Dyn>
std::vector<LrEvidence> lr_visits(const Sys& sys, const Dyn& dyn, typename Dyn::point_type seed, std::size_t T,
                                  std::size_t n_max) {
  LrTracker<Sys> tr(sys, n_max);
  itinerary(dyn, std::move(seed), T, "", [&](std::size_t t, const auto& x) { tr.observe(t, x); });
  return tr.evidence();
}

// distinct generation-n atoms entered by f^{t+n}(x), t + n <= T
template <class Sys, class Dyn>
std::size_t complexity_from_atoms(const Sys& sys, const Dyn& dyn, typename Dyn::point_type seed, std::size_t T,
                                  std::size_t n, std::size_t budget = default_budget) {
  auto a = atoms(sys, n, budget);
  std::vector<char> seen(a.size(), 0);
  std::size_t count = 0;
  itinerary(dyn, std::move(seed), T, "", [&](std::size_t t, const auto& x) {
    if (t < n) return;
    auto k = locate(sys, a, x);
    if (!k) throw CheckFailed("orbit point at time " + std::to_string(t) + " lies in no generation-" +
                              std::to_string(n) + " atom");
    if (!seen[*k]) {
      seen[*k] = 1;
      ++count;
    }
  });
  return count;
}

// smallest n with every generation-n atom holding at most one discontinuity
template <class Sys>
std::size_t n0_bound(const Sys& sys, std::size_t max_generation = 64, std::size_t budget = default_budget) {
  using P = typename Sys::point_type;
  std::vector<Atom<P>> gen{Atom<P>{{}, {sys.breakpoint(0), sys.breakpoint(sys.pieces())}}};
  for (std::size_t n = 1; n <= max_generation; ++n) {
    gen = next_generation(sys, gen, budget);
    bool ok = true;
    for (const auto& a : gen) {
      std::size_t inside = 0;
      for (std::size_t i = 1; i < sys.pieces(); ++i)
        if (!less(sys, sys.breakpoint(i), a.iv.lo) && !less(sys, a.iv.hi, sys.breakpoint(i))) ++inside;
      if (inside > 1) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  throw BudgetExceeded("n0 not reached within " + std::to_string(max_generation) + " generations");
}

}  // namespace pcm

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcm/errors.hpp"
#include "pcm/numeric.hpp"

namespace pcm {

enum class BoundaryPolicy { left_limit, right_limit, undefined };

std::string to_string(BoundaryPolicy p);
BoundaryPolicy parse_policy(const std::string& s);

template <class S>
struct Branch {
  Rational slope;
  S intercept;

  S operator()(const S& x) const { return x * slope + intercept; }
  bool operator==(const Branch&) const = default;
};

// N pieces, breakpoints c_0 < ... < c_N, one policy per interior breakpoint.
// Pieces are 1-based everywhere, following the itinerary alphabet {1..N}.
template <class S>
class BasicPAMap {
 public:
  BasicPAMap() = default;
  BasicPAMap(std::vector<S> breakpoints, std::vector<Branch<S>> branches,
             std::vector<BoundaryPolicy> policies)
      : breakpoints_(std::move(breakpoints)), branches_(std::move(branches)), policies_(std::move(policies)) {
    if (breakpoints_.size() < 2 || branches_.size() + 1 != breakpoints_.size())
      throw std::invalid_argument("need N+1 breakpoints for N branches");
    if (policies_.empty() && pieces() > 1) policies_.assign(pieces() - 1, BoundaryPolicy::right_limit);
    if (policies_.size() + 1 != branches_.size())
      throw std::invalid_argument("need one boundary policy per interior breakpoint");
  }

  std::size_t pieces() const { return branches_.size(); }
  const std::vector<S>& breakpoints() const { return breakpoints_; }
  const S& breakpoint(std::size_t i) const { return breakpoints_.at(i); }
  const Branch<S>& branch(std::size_t piece) const { return branches_.at(piece - 1); }
  const std::vector<Branch<S>>& branches() const { return branches_; }
  // policy at interior breakpoint c_i, 1 <= i <= N-1
  BoundaryPolicy policy(std::size_t i) const { return policies_.at(i - 1); }
  const std::vector<BoundaryPolicy>& policies() const { return policies_; }
  const S& lo() const { return breakpoints_.front(); }
  const S& hi() const { return breakpoints_.back(); }

  // common slope if all branches share one
  std::optional<Rational> uniform_slope() const {
    for (const auto& b : branches_)
      if (b.slope != branches_.front().slope) return std::nullopt;
    return branches_.front().slope;
  }
  Rational max_slope() const {
    Rational m = branches_.front().slope;
    for (const auto& b : branches_)
      if (b.slope > m) m = b.slope;
    return m;
  }

  bool operator==(const BasicPAMap&) const = default;

 private:
  std::vector<S> breakpoints_;
  std::vector<Branch<S>> branches_;
  std::vector<BoundaryPolicy> policies_;
};

using PAMap = BasicPAMap<Rational>;
using RealMap = BasicPAMap<Real>;

RealMap to_real(const PAMap& m);

template <class S>
struct ValidationWitness {
  enum class Kind { contraction, ordering, range, separation } kind;
  std::size_t i = 0, j = 0;  // branch indices (1-based); j = 0 when single-branch
  S lo, hi;                  // offending interval
};

template <class S>
struct ValidationReport {
  bool contraction_ok = true;
  bool pieces_ordered_ok = true;
  bool range_ok = true;
  bool separation_ok = true;
  std::vector<ValidationWitness<S>> witnesses;

  bool ok() const { return contraction_ok && pieces_ordered_ok && range_ok && separation_ok; }
};

template <class S>
ValidationReport<S> validate_map(const BasicPAMap<S>& m) {
  using W = ValidationWitness<S>;
  ValidationReport<S> rep;
  const std::size_t n = m.pieces();
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& b = m.branch(i);
    if (b.slope <= 0 || b.slope >= 1) {
      rep.contraction_ok = false;
      rep.witnesses.push_back(W{W::Kind::contraction, i, 0, m.breakpoint(i - 1), m.breakpoint(i)});
    }
    if (!(m.breakpoint(i - 1) < m.breakpoint(i))) {
      rep.pieces_ordered_ok = false;
      rep.witnesses.push_back(W{W::Kind::ordering, i, 0, m.breakpoint(i - 1), m.breakpoint(i)});
    }
  }
  if (!rep.pieces_ordered_ok) return rep;
  std::vector<Interval<S>> img;
  for (std::size_t i = 1; i <= n; ++i) {
    S a = m.branch(i)(m.breakpoint(i - 1));
    S b = m.branch(i)(m.breakpoint(i));
    if (b < a) std::swap(a, b);
    if (a < m.lo() || m.hi() < b) {
      rep.range_ok = false;
      rep.witnesses.push_back(W{W::Kind::range, i, 0, a, b});
    }
    img.push_back({a, b});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const S& lo = img[i].lo < img[j].lo ? img[j].lo : img[i].lo;
      const S& hi = img[i].hi < img[j].hi ? img[i].hi : img[j].hi;
      if (!(hi < lo)) {
        rep.separation_ok = false;
        rep.witnesses.push_back(W{W::Kind::separation, i + 1, j + 1, lo, hi});
      }
    }
  return rep;
}

// 1-based piece of x with X_1 = [c_0,c_1), X_N = (c_{N-1},c_N]; nullopt at
// an interior breakpoint.
template <class S>
std::optional<std::size_t> piece_index(const BasicPAMap<S>& m, const S& x) {
  if (x < m.lo() || m.hi() < x) throw OutOfDomain("point " + to_string(x) + " outside the domain");
  const auto& c = m.breakpoints();
  std::size_t lo = 1, hi = m.pieces();  // find first piece i with x <= c_i
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (x <= c[mid]) hi = mid;
    else lo = mid + 1;
  }
  if (lo < m.pieces() && x == c[lo]) return std::nullopt;
  return lo;
}

template <class S>
S extension_eval(const BasicPAMap<S>& m, std::size_t piece, const S& x) {
  if (piece < 1 || piece > m.pieces()) throw OutsidePiece("no piece " + std::to_string(piece));
  if (x < m.breakpoint(piece - 1) || m.breakpoint(piece) < x)
    throw OutsidePiece(to_string(x) + " outside closed piece " + std::to_string(piece));
  return m.branch(piece)(x);
}

// which branch acts at x, applying the boundary policy at breakpoints
template <class S>
std::size_t acting_piece(const BasicPAMap<S>& m, const S& x) {
  if (auto p = piece_index(m, x)) return *p;
  std::size_t i = 1;
  while (!(m.breakpoint(i) == x)) ++i;
  switch (m.policy(i)) {
    case BoundaryPolicy::left_limit: return i;
    case BoundaryPolicy::right_limit: return i + 1;
    case BoundaryPolicy::undefined: break;
  }
  throw BoundaryUndefined("map undefined at breakpoint " + to_string(x));
}

template <class S>
S eval(const BasicPAMap<S>& m, const S& x) {
  return m.branch(acting_piece(m, x))(x);
}

PAMap build_base_map(const Rational& lambda, const Rational& mu);
// same family with mu = mu(lambda, rho), see SturmianIntercept
RealMap build_sturmian_map(const Rational& lambda, const Quadratic& rho, std::size_t term_cap);

// dynamics adapter for itinerary(): symbol = open-piece index, nullopt on Delta
template <class S>
struct MapDynamics {
  using point_type = S;
  const BasicPAMap<S>* map;

  std::optional<std::size_t> symbol(const S& x) const { return piece_index(*map, x); }
  S step(const S& x, std::size_t piece) const { return map->branch(piece)(x); }
};

}  // namespace pcm

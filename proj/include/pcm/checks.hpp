#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcm/atoms.hpp"
#include "pcm/construct.hpp"
#include "pcm/symbolic.hpp"

namespace pcm {

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
  bool skipped = false;  // not applicable to this map; never counted as a pass or a failure
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> lines;

  void add(std::string name, bool pass, std::string detail = "") {
    lines.push_back({std::move(name), pass, std::move(detail), false});
  }
  void skip(std::string name, std::string why) { lines.push_back({std::move(name), true, std::move(why), true}); }
  bool ok() const {
    for (const auto& l : lines)
      if (!l.skipped && !l.pass) return false;
    return true;
  }
};

// One orbit: itinerary, complexity table, affine fit and lr evidence.
struct SeedRun {
  std::string label;
  Itinerary itinerary;
  ComplexityTable table;
  std::optional<AffineFit> fit;
  std::vector<LrEvidence> lr;
};

template <class Sys, class Dyn, class Visit>
SeedRun run_seed(const Sys& sys, const Dyn& dyn, typename Dyn::point_type x, std::string label, std::size_t T,
                 std::size_t n_max, Visit&& visit) {
  LrTracker<Sys> tracker(sys, n_max);
  SeedRun r;
  r.label = label;
  r.itinerary = itinerary(dyn, std::move(x), T, std::move(label), [&](std::size_t t, const auto& p) {
    tracker.observe(t, p);
    visit(t, p);
  });
  r.table = complexity(r.itinerary, n_max);
  r.fit = fit_affine(r.table);
  r.lr = tracker.evidence();
  return r;
}

template <class Sys, class Dyn>
SeedRun run_seed(const Sys& sys, const Dyn& dyn, typename Dyn::point_type x, std::string label, std::size_t T,
                 std::size_t n_max) {
  return run_seed(sys, dyn, std::move(x), std::move(label), T, n_max, [](std::size_t, const auto&) {});
}

std::string describe(const SeedRun& r);

// fit present (and equal to `expect` = (alpha, beta, m0) when given), slope
// identity against lr evidence at level m0+5, and the COMPNP1 sandwich
// #witnessed(n) <= p(n+1) - p(n) <= #Delta over the stabilized range
std::vector<CheckLine> complexity_checks(const SeedRun& r, std::size_t pieces,
                                         std::optional<AffineFit> expect = std::nullopt);

// disjointness, nesting, diameter decay, Lambda_n = X \ U H_k (2-piece
// base maps passing gaps_base), orbit-in-atom for T steps from seed
SuiteResult atom_suite(const RealMap& m, std::size_t depth, std::size_t T, const Real& seed,
                       std::size_t budget = default_budget);

// complexity_from_atoms(n) == word-count p_T(n), n <= n_max
SuiteResult cross_oracle_suite(const RealMap& m, const Real& seed, std::size_t T, std::size_t n_max,
                               std::size_t budget = default_budget);

// g_step^t(Base(x)) == Base(f^t(x)) for `seeds` rational seeds and
// g_step^t(Gap(1, lambda)) == Gap(1+t, lambda^(1+t)) for every level
SuiteResult conjugacy_suite(const ExtendedMap& em, std::size_t steps, std::size_t seeds = 10);

// phi enclosure of c_N, total inserted length, gap closure disjointness,
// phi monotonicity on a rational sample
SuiteResult phi_suite(const ExtendedMap& em, std::size_t R, std::size_t horizon);

// per stage: generation-1 atoms disjoint and n0 = 1
SuiteResult stage_suite(const ExtendedMap& em, std::size_t budget = default_budget);

SuiteResult lambda_g_suite(const ExtendedMap& em, std::size_t depth, std::size_t budget = default_budget);

// Orbit density proxy: base-coordinate projection of tagged orbit points
// (Plain(x) -> x, Gap(xi_r) -> xi_r) against the base generation-n atoms.
class AtomVisits {
 public:
  AtomVisits(const RealMap& base, std::size_t generation, std::size_t budget = default_budget);
  void observe(const TaggedPoint& p);
  std::size_t atoms() const { return atoms_.size(); }
  std::size_t visited() const;
  std::size_t generation() const { return generation_; }

 private:
  std::vector<Atom<Real>> atoms_;
  std::vector<char> seen_;
  std::size_t generation_;
};

struct GridSearch {
  std::size_t max_den = 0;
  std::size_t horizon = 0;
  std::size_t pairs = 0;  // admissible pairs tried
  std::vector<std::pair<Rational, Rational>> passing;
  std::pair<Rational, Rational> longest;  // pair surviving the most steps
  std::size_t longest_k = 0;
};

// all (lambda, mu) with denominators <= max_den, lambda + mu > 1
GridSearch grid_search(std::size_t max_den, std::size_t horizon, unsigned threads = 0);

}  // namespace pcm

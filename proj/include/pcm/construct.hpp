#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pcm/atoms.hpp"
#include "pcm/lazy.hpp"
#include "pcm/tagged.hpp"

namespace pcm {

struct ConstructOptions {
  std::uint64_t seed = 1;
  std::size_t verify_horizon = 10000;
  std::size_t exclusion_horizon = 1000;
  std::size_t refinement_cap = 1000000;
  std::size_t max_candidates = 64;
  std::size_t budget = default_budget;
};

// Atom system view of an extended map (the map itself satisfies the interface).
using TaggedAtom = Atom<TaggedPoint>;

// Well-cutting orbit for the next level of `parent`.  xi_0 is coded by a
// seeded rational rotation angle and must fall in the first generation-1
// atom of the parent that holds no discontinuity.  Exclusions are checked up
// to opts.exclusion_horizon; candidates failing refinement are skipped.
std::shared_ptr<CutOrbit> select_well_cutting(const ExtendedMap& parent, const ConstructOptions& opts);

ExtendedMap build_extended(const ExtendedMap& parent, std::shared_ptr<const CutOrbit> cut);

struct StageReport {
  std::size_t stage = 0;
  std::size_t pieces = 0;
  std::size_t n0 = 0;
  bool disjoint = false;
};

struct Construction {
  Rational lambda;
  Quadratic rho;
  std::size_t term_cap = 0;
  std::shared_ptr<const RealMap> base;
  VerifyResult<Real> verified;
  std::vector<std::shared_ptr<const CutOrbit>> cuts;
  std::vector<StageReport> stages;

  ExtendedMap map() const { return ExtendedMap(base, cuts); }
};

// base -> extended -> ... with n_target pieces.  ConstructionFailed(stage) on
// a rejected base (stage 0) or a stage failing n0 = 1 / separation.
Construction construct_full_complexity(std::size_t n_target, const Rational& lambda, const Quadratic& rho,
                                       const ConstructOptions& opts = {});

// phi for one cut over its own base: [x + sum_{n<=R, xi_n<x} lambda^n, + lambda^{R+1}/(1-lambda)]
Interval<Real> phi_enclosure(const CutOrbit& cut, const Real& x, std::size_t R);

// position of a tagged point in the real line after all insertions of em,
// orbit sums truncated at R (width levels * lambda^{R+1}/(1-lambda))
Interval<Real> embed_enclosure(const ExtendedMap& em, const TaggedPoint& p, std::size_t R);

// closures of G_1..G_H pairwise disjoint, i.e. xi_1..xi_H pairwise distinct
bool gap_closures_disjoint(const std::shared_ptr<const CutOrbit>& cut, std::size_t H);

struct LambdaGReport {
  std::size_t depth = 0;
  std::size_t checks = 0;
};

// Structure of Lambda_{g,n} against the parent's Lambda_{f,n}, n <= depth:
// gap interiors G_r (r <= n) are removed except right endpoints, pending gaps
// G_r (r > n) are still covered, and collapsing the newest gaps maps the
// generation-n union of g onto that of the parent.  CheckFailed on violation.
LambdaGReport lambda_g_check(const ExtendedMap& em, std::size_t depth, std::size_t budget = default_budget);

}  // namespace pcm

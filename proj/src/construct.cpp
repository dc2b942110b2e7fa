#include "pcm/construct.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "pcm/errors.hpp"

namespace pcm {

namespace {

bool lt(const TaggedPoint& a, const TaggedPoint& b) { return compare(a, b) == std::strong_ordering::less; }
bool eq(const TaggedPoint& a, const TaggedPoint& b) { return compare(a, b) == std::strong_ordering::equal; }

void distinct(const OrbitRef& a, const Position& b, std::size_t& count) {
  if (compare_positions(Position(a), b) == std::strong_ordering::equal)
    throw RefinementExhausted("cut orbit meets an excluded point");
  ++count;
}

std::string span(const Interval<TaggedPoint>& iv) { return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]"; }

}  // namespace

std::shared_ptr<CutOrbit> select_well_cutting(const ExtendedMap& parent, const ConstructOptions& opts) {
  const RealMap& base = parent.base();
  auto tau = std::dynamic_pointer_cast<const SturmianIntercept>(base.branch(1).intercept.tau());
  if (!tau || base.pieces() != 2) throw std::invalid_argument("well-cutting selection needs a Sturmian base map");
  const std::size_t level = parent.levels() + 1;
  const std::size_t H = opts.exclusion_horizon;

  auto gen1 = atoms(parent, 1, opts.budget);
  std::size_t clean = gen1.size();
  for (std::size_t k = 0; k < gen1.size() && clean == gen1.size(); ++k) {
    bool hit = false;
    for (std::size_t i = 1; i < parent.pieces(); ++i) {
      const TaggedPoint& d = parent.breakpoint(i);
      if (!lt(d, gen1[k].iv.lo) && !lt(gen1[k].iv.hi, d)) hit = true;
    }
    if (!hit) clean = k;
  }
  if (clean == gen1.size()) throw NoCleanAtom("every generation-1 atom contains a discontinuity");
  const TaggedPoint& L = gen1[clean].iv.lo;
  const TaggedPoint& R = gen1[clean].iv.hi;

  std::vector<Real> Y{base.lo(), base.hi()};
  for (std::size_t i = 1; i < base.pieces(); ++i) {
    Y.push_back(base.branch(i)(base.breakpoint(i)));
    Y.push_back(base.branch(i + 1)(base.breakpoint(i)));
  }
  std::vector<Real> ys;
  for (auto& y : Y)
    if (std::find(ys.begin(), ys.end(), y) == ys.end()) ys.push_back(y);
  std::vector<Position> excluded;  // positions xi_u must avoid
  for (std::size_t i = 1; i < base.pieces(); ++i) excluded.emplace_back(base.breakpoint(i));
  for (const auto& c : parent.cuts()) excluded.emplace_back(c->origin());
  for (const auto& y : ys) excluded.emplace_back(y);

  std::seed_seq ss{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                   static_cast<std::uint32_t>(level)};
  std::mt19937_64 rng(ss);
  const Rational denom = power(Rational(2), 25);
  for (std::size_t cand = 0; cand < opts.max_candidates; ++cand) {
    const std::uint64_t u = rng() >> 40;
    Rational theta = Rational(Integer(static_cast<unsigned long>(2 * u + 1))) / denom;
    bool reused = false;
    for (const auto& c : parent.cuts()) reused |= c->xi0().angle() == theta;
    if (reused) continue;

    CutRecord rec{level, opts.seed, cand, H, clean, {}};
    auto cut = std::make_shared<CutOrbit>(parent.base_ptr(), LazyPoint(parent.base_ptr(), tau->rho(), theta,
                                                                       opts.refinement_cap),
                                          rec);
    try {
      TaggedPoint eta = plain(cut->origin());
      if (!lt(L, eta) || !lt(eta, R)) continue;

      std::size_t n_excl = 0, n_self = 0, n_back_y = 0, n_back_cut = 0;
      OrbitRef xi = cut->origin();
      const Position self(cut->origin());
      for (std::size_t t = 0; t <= H; ++t) {
        for (const auto& e : excluded) distinct(xi, e, n_excl);
        if (t >= 1) distinct(xi, self, n_self);
        advance(xi, base);
      }
      for (const auto& y : ys) {
        Real z = y;
        for (std::size_t s = 1; s <= H; ++s) {
          z = eval(base, z);
          distinct(cut->origin(), Position(z), n_back_y);
        }
      }
      for (const auto& c : parent.cuts()) {
        OrbitRef w = c->origin();
        for (std::size_t s = 1; s <= H; ++s) {
          advance(w, base);
          distinct(cut->origin(), Position(w), n_back_cut);
        }
      }
      cut->record().checks = {{"in_clean_atom", 1},
                              {"orbit_avoids_breakpoints_cuts_endpoints", n_excl},
                              {"orbit_not_periodic", n_self},
                              {"not_on_endpoint_orbits", n_back_y},
                              {"not_on_earlier_cut_orbits", n_back_cut}};
      return cut;
    } catch (const RefinementExhausted&) {
      continue;
    } catch (const DiscontinuityHit&) {
      continue;
    }
  }
  throw ConstructionFailed(level, "no well-cutting candidate among " + std::to_string(opts.max_candidates));
}

ExtendedMap build_extended(const ExtendedMap& parent, std::shared_ptr<const CutOrbit> cut) {
  auto cuts = parent.cuts();
  if (cut->level() != cuts.size() + 1) throw std::invalid_argument("cut level does not follow the parent");
  cuts.push_back(std::move(cut));
  return ExtendedMap(parent.base_ptr(), std::move(cuts));
}

Construction construct_full_complexity(std::size_t n_target, const Rational& lambda, const Quadratic& rho,
                                       const ConstructOptions& opts) {
  if (n_target < 2) throw std::invalid_argument("at least two pieces");
  Construction c;
  c.lambda = lambda;
  c.rho = rho;
  c.term_cap = opts.refinement_cap;
  c.base = std::make_shared<const RealMap>(build_sturmian_map(lambda, rho, opts.refinement_cap));
  try {
    c.verified = verify_no_periodic(*c.base, opts.verify_horizon);
  } catch (const RefinementExhausted& e) {
    throw ConstructionFailed(0, e.what());
  }
  if (!c.verified.pass) throw ConstructionFailed(0, "base rejected at k=" + std::to_string(c.verified.k));

  ExtendedMap cur(c.base, {});
  c.stages.push_back({0, 2, n0_bound(cur, 8, opts.budget), !check_disjoint(cur, atoms(cur, 1, opts.budget))});
  for (std::size_t k = 1; k + 2 <= n_target; ++k) {
    std::shared_ptr<CutOrbit> cut;
    try {
      cut = select_well_cutting(cur, opts);
    } catch (const NoCleanAtom& e) {
      throw ConstructionFailed(k, e.what());
    }
    cur = build_extended(cur, cut);
    StageReport r{k, cur.pieces(), 0, false};
    r.disjoint = !check_disjoint(cur, atoms(cur, 1, opts.budget));
    try {
      r.n0 = n0_bound(cur, 8, opts.budget);
    } catch (const BudgetExceeded&) {
      r.n0 = 0;
    }
    if (r.n0 != 1) throw ConstructionFailed(k, "n0 = " + std::to_string(r.n0) + ", expected 1");
    if (!r.disjoint) throw ConstructionFailed(k, "generation-1 atoms overlap");
    c.cuts.push_back(cut);
    c.stages.push_back(r);
  }
  return c;
}

Interval<Real> phi_enclosure(const CutOrbit& cut, const Real& x, std::size_t R) {
  const Rational lambda = cut.lambda();
  Real lo = x;
  OrbitRef xi = cut.origin();
  Rational lp = 1;
  for (std::size_t n = 1; n <= R; ++n) {
    advance(xi, cut.base());
    lp *= lambda;
    if (compare_positions(Position(xi), Position(x)) == std::strong_ordering::less) lo += Real(lp);
  }
  Real hi = lo + Real(lp * lambda / (1 - lambda));
  return {lo, hi};
}

Interval<Real> embed_enclosure(const ExtendedMap& em, const TaggedPoint& p, std::size_t R) {
  const Rational lambda = em.lambda();
  Interval<Real> e = enclose(p.pos, R + 64);
  Rational shift = p.offset;
  for (const auto& cut : em.cuts()) {
    OrbitRef xi = cut->origin();
    Rational lp = 1;
    for (std::size_t n = 1; n <= R; ++n) {
      advance(xi, em.base());
      lp *= lambda;
      if (p.level == cut->level() && p.r() == n) continue;
      if (lt(plain(xi), p)) shift += lp;
    }
  }
  Rational tail = power(lambda, R + 1) / (1 - lambda) * static_cast<unsigned long>(em.levels());
  return {e.lo + Real(shift), e.hi + Real(shift + tail)};
}

bool gap_closures_disjoint(const std::shared_ptr<const CutOrbit>& cut, std::size_t H) {
  std::vector<Position> xs;
  OrbitRef xi = cut->origin();
  for (std::size_t r = 1; r <= H; ++r) {
    advance(xi, cut->base());
    xs.emplace_back(xi);
  }
  std::sort(xs.begin(), xs.end(),
            [](const Position& a, const Position& b) { return compare_positions(a, b) == std::strong_ordering::less; });
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (compare_positions(xs[k - 1], xs[k]) != std::strong_ordering::less) return false;
  return true;
}

LambdaGReport lambda_g_check(const ExtendedMap& em, std::size_t depth, std::size_t budget) {
  if (em.levels() == 0) throw std::invalid_argument("lambda_g_check needs an extended map");
  const auto& cut = em.cuts().back();
  const std::size_t K = em.levels();
  const ExtendedMap par = em.parent();
  LambdaGReport rep{depth, 0};

  std::vector<TaggedPoint> left{plain(cut->origin())}, right{plain(cut->origin())};
  std::vector<Rational> lp{1};
  OrbitRef xi = cut->origin();
  for (std::size_t r = 1; r <= depth + 8; ++r) {
    advance(xi, em.base());
    lp.push_back(lp.back() * em.lambda());
    left.push_back(plain(xi));
    right.push_back(TaggedPoint{Position(xi), K, lp.back()});
  }

  struct End {
    TaggedPoint p;
    bool open;
  };
  auto project = [&](const TaggedPoint& x, bool is_left) {
    if (x.level != K) return End{x, false};
    return End{plain(std::get<OrbitRef>(x.pos)), is_left && x.offset == lp.at(x.r())};
  };

  std::vector<TaggedAtom> g{{{}, {em.breakpoint(0), em.breakpoint(em.pieces())}}};
  std::vector<TaggedAtom> f{{{}, {par.breakpoint(0), par.breakpoint(par.pieces())}}};
  for (std::size_t n = 1; n <= depth; ++n) {
    g = next_generation(em, g, budget);
    f = next_generation(par, f, budget);
    const std::string gen = " at generation " + std::to_string(n);

    for (std::size_t r = 1; r <= n; ++r) {
      if (!locate(em, g, right[r])) throw CheckFailed("right end of G_" + std::to_string(r) + " missing" + gen);
      for (const auto& a : g)
        if (lt(a.iv.lo, right[r]) && lt(left[r], a.iv.hi))
          throw CheckFailed("atom " + span(a.iv) + " meets the interior of G_" + std::to_string(r) + gen);
      ++rep.checks;
    }
    for (std::size_t r = n + 1; r <= n + 8; ++r) {
      bool covered = std::any_of(g.begin(), g.end(), [&](const TaggedAtom& a) {
        return !lt(left[r], a.iv.lo) && !lt(a.iv.hi, right[r]);
      });
      if (!covered) throw CheckFailed("pending gap G_" + std::to_string(r) + " not covered" + gen);
      ++rep.checks;
    }

    std::vector<std::pair<End, End>> ivs;
    for (const auto& a : g) {
      End lo = project(a.iv.lo, true), hi = project(a.iv.hi, false);
      auto c = compare(lo.p, hi.p);
      if (c == std::strong_ordering::greater || (c == std::strong_ordering::equal && lo.open)) continue;
      ivs.emplace_back(std::move(lo), std::move(hi));
    }
    std::sort(ivs.begin(), ivs.end(), [](const auto& x, const auto& y) {
      auto c = compare(x.first.p, y.first.p);
      return c == std::strong_ordering::less || (c == std::strong_ordering::equal && !x.first.open && y.first.open);
    });
    std::vector<std::pair<End, End>> merged;
    for (auto& iv : ivs) {
      if (!merged.empty() && !lt(merged.back().second.p, iv.first.p)) {
        if (lt(merged.back().second.p, iv.second.p)) merged.back().second = iv.second;
      } else {
        merged.push_back(std::move(iv));
      }
    }
    auto target = union_of(par, f, n);
    if (merged.size() != target.intervals.size())
      throw CheckFailed("collapsed union has " + std::to_string(merged.size()) + " components, parent has " +
                        std::to_string(target.intervals.size()) + gen);
    for (std::size_t k = 0; k < merged.size(); ++k) {
      const auto& [lo, hi] = merged[k];
      if (lo.open || !eq(lo.p, target.intervals[k].lo) || !eq(hi.p, target.intervals[k].hi))
        throw CheckFailed("collapsed component " + std::string(lo.open ? "(" : "[") + to_string(lo.p) + ", " +
                          to_string(hi.p) + "] differs from parent " + span(target.intervals[k]) + gen);
      ++rep.checks;
    }
  }
  return rep;
}

}  // namespace pcm

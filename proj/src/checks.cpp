#include "pcm/checks.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace pcm {

namespace {

std::string fit_text(const AffineFit& f) {
  return "alpha=" + std::to_string(f.alpha) + " beta=" + std::to_string(f.beta) + " m0=" + std::to_string(f.m0) +
         " range=[" + std::to_string(f.m0) + "," + std::to_string(f.last) + "]";
}

bool inside(const Interval<Real>& iv, const Real& x) { return !(x < iv.lo) && !(iv.hi < x); }

}  // namespace

std::string describe(const SeedRun& r) {
  std::string s = r.label + ": T=" + std::to_string(r.itinerary.size());
  if (r.itinerary.truncation == Truncation::boundary_hit)
    s += " boundary hit at t=" + std::to_string(r.itinerary.boundary_time);
  s += " stabilized<=" + std::to_string(r.table.stabilized_up_to);
  s += r.fit ? " " + fit_text(*r.fit) : " NotStabilized";
  return s;
}

std::vector<CheckLine> complexity_checks(const SeedRun& r, std::size_t pieces, std::optional<AffineFit> expect) {
  std::vector<CheckLine> out;
  if (!r.fit) {
    out.push_back({"fit", false, describe(r) + " (NotStabilized)"});
    return out;
  }
  const AffineFit& f = *r.fit;
  bool match = !expect || (f.alpha == expect->alpha && f.beta == expect->beta && f.m0 == expect->m0);
  out.push_back({"fit", match, describe(r)});

  const std::size_t level = f.m0 + 5;
  std::size_t w = witnessed_count(r.lr, level);
  out.push_back({"slope_identity", static_cast<std::int64_t>(w) == f.alpha,
                 "alpha=" + std::to_string(f.alpha) + " two-sided lr evidence at level " + std::to_string(level) +
                     ": " + std::to_string(w)});

  bool sandwich = true;
  std::string where;
  const std::size_t top = std::min(r.table.stabilized_up_to, r.table.n_max());
  for (std::size_t n = 1; n + 1 <= top; ++n) {
    std::uint64_t d = r.table.p(n + 1) - r.table.p(n);
    std::size_t lo = witnessed_count(r.lr, n);
    if (d < lo || d > pieces - 1) {
      sandwich = false;
      where = "n=" + std::to_string(n) + " witnessed=" + std::to_string(lo) + " increment=" + std::to_string(d);
      break;
    }
  }
  out.push_back({"sandwich", sandwich,
                 sandwich ? "#witnessed <= p(n+1)-p(n) <= " + std::to_string(pieces - 1) + " for n < " +
                                std::to_string(top)
                          : where});
  return out;
}

SuiteResult atom_suite(const RealMap& m, std::size_t depth, std::size_t T, const Real& seed, std::size_t budget) {
  SuiteResult s{"atoms", {}};
  MapSystem<Real> sys{&m};
  const Rational lambda = m.max_slope();
  std::vector<std::vector<Atom<Real>>> gens;
  gens.push_back({Atom<Real>{{}, {m.lo(), m.hi()}}});
  for (std::size_t n = 1; n <= depth; ++n) gens.push_back(next_generation(sys, gens.back(), budget));

  std::string bad;
  for (std::size_t n = 1; n <= depth && bad.empty(); ++n)
    if (auto w = check_disjoint(sys, gens[n]))
      bad = "generation " + std::to_string(n) + ": " + to_string(gens[n][w->first].word) + " meets " +
            to_string(gens[n][w->second].word);
  s.add("disjoint", bad.empty(), bad.empty() ? "generations 1.." + std::to_string(depth) : bad);

  // A_{i1..in} = f_in(A_{i1..in-1} ∩ X_in) lies in A_{i2..in}
  bad.clear();
  for (std::size_t n = 2; n <= depth && bad.empty(); ++n) {
    std::map<Word, Interval<Real>> prev;
    for (const auto& a : gens[n - 1]) prev.emplace(a.word, a.iv);
    for (const auto& a : gens[n]) {
      Word suffix(a.word.begin() + 1, a.word.end());
      auto it = prev.find(suffix);
      if (it == prev.end() || a.iv.lo < it->second.lo || it->second.hi < a.iv.hi) {
        bad = to_string(a.word) + " not inside " + to_string(suffix);
        break;
      }
    }
  }
  s.add("nesting", bad.empty(), bad.empty() ? "every atom inside its suffix atom" : bad);

  bad.clear();
  for (std::size_t n = 1; n <= depth && bad.empty(); ++n) {
    std::map<Word, Real> prev;
    for (const auto& a : gens[n - 1]) prev.emplace(a.word, a.iv.hi - a.iv.lo);
    for (const auto& a : gens[n]) {
      Word head(a.word.begin(), a.word.end() - 1);
      if (lambda * prev.at(head) < a.iv.hi - a.iv.lo) {
        bad = to_string(a.word) + " shrinks by less than lambda";
        break;
      }
    }
  }
  s.add("diameter_decay", bad.empty(), bad.empty() ? "diam(A_wi) <= lambda diam(A_w)" : bad);

  if (m.pieces() != 2) {
    s.skip("lambda_h", "needs a 2-piece base map");
  } else {
    try {
      auto H = gaps_base(m, depth);
      bool same = true;
      for (std::size_t n = 1; n <= depth && same; ++n) {
        std::vector<Interval<Real>> h(H.begin(), H.begin() + static_cast<std::ptrdiff_t>(n));
        std::sort(h.begin(), h.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
        auto approx = union_of(sys, gens[n], n);
        same = approx.gaps == h;
        if (!same) bad = "generation " + std::to_string(n);
      }
      s.add("lambda_h", same, same ? "Lambda_n = X minus H_0..H_{n-1}, n <= " + std::to_string(depth) : bad);
    } catch (const CViolation& e) {
      s.skip("lambda_h", e.what());
    } catch (const std::invalid_argument& e) {
      s.skip("lambda_h", e.what());
    }
  }

  std::vector<Real> orbit;
  MapDynamics<Real> dyn{&m};
  auto it = itinerary(dyn, seed, T, "", [&](std::size_t, const Real& x) { orbit.push_back(x); });
  const std::size_t len = it.size();
  bad.clear();
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= depth && bad.empty(); ++n) {
    std::map<Word, Interval<Real>> by_word;
    for (const auto& a : gens[n]) by_word.emplace(a.word, a.iv);
    for (std::size_t t = 0; t + n <= len; ++t) {
      Word w(it.symbols.begin() + static_cast<std::ptrdiff_t>(t), it.symbols.begin() + static_cast<std::ptrdiff_t>(t + n));
      auto a = by_word.find(w);
      ++checked;
      if (a == by_word.end() || !inside(a->second, orbit[t + n])) {
        bad = "f^" + std::to_string(t + n) + "(x) outside atom " + to_string(w);
        break;
      }
    }
  }
  std::string note = "T=" + std::to_string(len) + ", " + std::to_string(checked) + " (t,n) pairs";
  if (it.truncation == Truncation::boundary_hit) note += ", orbit hit Delta at t=" + std::to_string(it.boundary_time);
  s.add("orbit_in_atom", bad.empty(), bad.empty() ? note : bad);
  return s;
}

SuiteResult cross_oracle_suite(const RealMap& m, const Real& seed, std::size_t T, std::size_t n_max,
                               std::size_t budget) {
  SuiteResult s{"cross_oracle", {}};
  MapSystem<Real> sys{&m};
  MapDynamics<Real> dyn{&m};
  auto it = itinerary(dyn, seed, T);
  auto table = complexity(it, n_max);
  std::string counts;
  bool ok = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::size_t a = complexity_from_atoms(sys, dyn, seed, it.size(), n, budget);
    counts += (n > 1 ? " " : "") + std::to_string(a);
    if (a != table.p(n)) {
      ok = false;
      counts += "(words " + std::to_string(table.p(n)) + ")";
    }
  }
  s.add("atoms_equal_words", ok, "T=" + std::to_string(it.size()) + " p: " + counts);
  return s;
}

SuiteResult conjugacy_suite(const ExtendedMap& em, std::size_t steps, std::size_t seeds) {
  SuiteResult s{"conjugacy", {}};
  const RealMap& f = em.base();
  std::size_t done = 0, skipped = 0;
  std::string bad;
  for (unsigned long k = 1; done < seeds && k <= 4 * seeds + 8 && bad.empty(); ++k) {
    Real x = f.lo() + (f.hi() - f.lo()) * (Rational(2 * k - 1) / static_cast<unsigned long>(4 * seeds + 17));
    TaggedPoint p = plain(x);
    try {
      for (std::size_t t = 1; t <= steps; ++t) {
        p = em.g_step(p);
        x = eval(f, x);
        if (!identical(p, plain(x))) {
          bad = "seed " + std::to_string(k) + " t=" + std::to_string(t) + ": " + to_string(p) + " vs Base(" +
                x.str() + ")";
          break;
        }
      }
      ++done;
    } catch (const DiscontinuityHit&) {
      ++skipped;
    } catch (const BoundaryUndefined&) {
      ++skipped;
    }
  }
  s.add("base_orbits", bad.empty() && done == seeds,
        bad.empty() ? std::to_string(done) + " rational seeds, t <= " + std::to_string(steps) +
                          (skipped ? ", " + std::to_string(skipped) + " seeds met Delta" : "")
                    : bad);

  bad.clear();
  for (const auto& cut : em.cuts()) {
    const Rational lambda = em.lambda();
    TaggedPoint p = gap_point(cut, 1, lambda);
    OrbitRef r = cut->origin();
    advance(r, em.base());
    Rational o = lambda;
    for (std::size_t t = 1; t <= steps && bad.empty(); ++t) {
      p = em.g_step(p);
      advance(r, em.base());
      o *= lambda;
      if (!identical(p, TaggedPoint{Position(r), cut->level(), o}))
        bad = "level " + std::to_string(cut->level()) + " t=" + std::to_string(t) + ": " + to_string(p);
    }
  }
  if (em.cuts().empty()) s.skip("gap_orbits", "no cuts");
  else
    s.add("gap_orbits", bad.empty(),
          bad.empty() ? "Gap(1,lambda) -> Gap(1+t,lambda^(1+t)), t <= " + std::to_string(steps) + ", " +
                            std::to_string(em.levels()) + " levels"
                      : bad);
  return s;
}

SuiteResult phi_suite(const ExtendedMap& em, std::size_t R, std::size_t horizon) {
  SuiteResult s{"phi", {}};
  const Rational lambda = em.lambda();
  const Rational total = lambda / (1 - lambda);
  const Real cN = em.base().hi(), c0 = em.base().lo();
  for (const auto& cut : em.cuts()) {
    const std::string tag = "[level " + std::to_string(cut->level()) + "] ";
    bool ok = true;
    std::string det;
    for (std::size_t r : {R / 4, R / 2, R}) {
      auto e = phi_enclosure(*cut, cN, r);
      Rational bound = power(lambda, r + 1) / (1 - lambda);
      Real limit = cN + Real(total);
      Real mid = (e.lo + e.hi) / Rational(2);
      Real err = limit < mid ? mid - limit : limit - mid;
      ok = ok && e.hi - e.lo == Real(bound) && inside(e, limit) && !(Real(bound) < err);
      det = "R=" + std::to_string(r) + " phi(c_N) in [" + e.lo.decimal() + ", " + e.hi.decimal() + "], limit " +
            limit.decimal();
    }
    s.add(tag + "phi_cN", ok, det);
    auto e0 = phi_enclosure(*cut, c0, R);
    s.add(tag + "phi_c0", e0.lo == c0, "lower end " + e0.lo.str());

    Rational sum = 0, lp = 1;
    for (std::size_t r = 1; r <= R; ++r) sum += (lp *= lambda);
    s.add(tag + "total_gap_length", sum + lp * lambda / (1 - lambda) == total,
          "sum lambda^r = " + to_string(total));

    s.add(tag + "gap_closures_disjoint", gap_closures_disjoint(cut, horizon), "r <= " + std::to_string(horizon));

    // rational sample x < x' gives disjoint ordered enclosures
    bool mono = true;
    Interval<Real> last;
    for (unsigned long k = 0; k <= 16 && mono; ++k) {
      Real x = c0 + (cN - c0) * (Rational(2 * k + 1) / 35);
      auto e = phi_enclosure(*cut, x, R);
      if (k > 0 && !(last.hi < e.lo)) mono = false;
      last = e;
    }
    s.add(tag + "phi_monotone", mono, "17 rational points, R=" + std::to_string(R));
  }
  if (em.cuts().empty()) s.skip("phi", "no cuts");
  return s;
}

SuiteResult stage_suite(const ExtendedMap& em, std::size_t budget) {
  SuiteResult s{"stages", {}};
  std::vector<std::shared_ptr<const CutOrbit>> cuts;
  for (std::size_t k = 0; k <= em.levels(); ++k) {
    if (k > 0) cuts.push_back(em.cuts()[k - 1]);
    ExtendedMap m(em.base_ptr(), cuts);
    auto gen1 = atoms(m, 1, budget);
    auto w = check_disjoint(m, gen1);
    s.add("stage " + std::to_string(k) + " separation", !w,
          std::to_string(m.pieces()) + " pieces, " + std::to_string(gen1.size()) + " generation-1 atoms");
    std::size_t n0 = 0;
    try {
      n0 = n0_bound(m, 8, budget);
    } catch (const BudgetExceeded&) {
    }
    s.add("stage " + std::to_string(k) + " n0", n0 == 1, "n0 = " + (n0 ? std::to_string(n0) : std::string(">8")));
  }
  return s;
}

SuiteResult lambda_g_suite(const ExtendedMap& em, std::size_t depth, std::size_t budget) {
  SuiteResult s{"lambda_g", {}};
  if (em.levels() == 0) {
    s.skip("lambda_g", "no cuts");
    return s;
  }
  try {
    auto rep = lambda_g_check(em, depth, budget);
    s.add("lambda_g", true, "depth " + std::to_string(rep.depth) + ", " + std::to_string(rep.checks) + " checks");
  } catch (const CheckFailed& e) {
    s.add("lambda_g", false, e.what());
  }
  return s;
}

AtomVisits::AtomVisits(const RealMap& base, std::size_t generation, std::size_t budget) : generation_(generation) {
  MapSystem<Real> sys{&base};
  atoms_ = pcm::atoms(sys, generation, budget);
  seen_.assign(atoms_.size(), 0);
}

void AtomVisits::observe(const TaggedPoint& p) {
  auto lt = [&](const Real& a, const Position& x) { return compare_positions(Position(a), x) < 0; };
  std::size_t lo = 0, hi = atoms_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (compare_positions(p.pos, Position(atoms_[mid].iv.lo)) < 0) hi = mid;
    else lo = mid + 1;
  }
  if (lo == 0 || lt(atoms_[lo - 1].iv.hi, p.pos))
    throw CheckFailed(to_string(p) + " projects outside every generation-" + std::to_string(generation_) + " atom");
  seen_[lo - 1] = 1;
}

std::size_t AtomVisits::visited() const { return static_cast<std::size_t>(std::count(seen_.begin(), seen_.end(), 1)); }

GridSearch grid_search(std::size_t max_den, std::size_t horizon, unsigned threads) {
  std::vector<Rational> fr;
  for (unsigned long q = 2; q <= max_den; ++q)
    for (unsigned long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) fr.emplace_back(p, q);
  std::sort(fr.begin(), fr.end());
  GridSearch g;
  g.max_den = max_den;
  g.horizon = horizon;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0}, pairs{0};
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < fr.size();) {
      std::size_t local_pairs = 0, best = 0;
      std::pair<Rational, Rational> best_pair;
      std::vector<std::pair<Rational, Rational>> pass;
      for (const auto& mu_v : fr) {
        if (fr[i] + mu_v <= 1) continue;
        ++local_pairs;
        auto r = verify_no_periodic(fr[i], mu_v, horizon);
        if (r.pass) pass.emplace_back(fr[i], mu_v);
        else if (r.k > best) best = r.k, best_pair = {fr[i], mu_v};
      }
      std::lock_guard lock(mu);
      pairs += local_pairs;
      g.passing.insert(g.passing.end(), pass.begin(), pass.end());
      if (best > g.longest_k || (best == g.longest_k && best_pair < g.longest)) {
        g.longest_k = best;
        g.longest = best_pair;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  g.pairs = pairs;
  std::sort(g.passing.begin(), g.passing.end());
  return g;
}

}  // namespace pcm

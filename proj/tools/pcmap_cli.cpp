// pcmap: command-line front end.
// Exit status: 0 ok, 1 usage or parse error, 2 mathematical rejection,
// 3 budget or refinement exhaustion, 4 complexity not stabilized.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcm/checks.hpp"
#include "pcm/construct.hpp"
#include "pcm/handle.hpp"
#include "pcm/report.hpp"

using namespace pcm;

namespace {

constexpr int exit_ok = 0, exit_usage = 1, exit_reject = 2, exit_exhausted = 3, exit_unstable = 4;

struct Global {
  std::size_t budget = default_budget;
  std::size_t refine_cap = 1000000;
  std::string format = "csv";
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "p/q" or a rotation number: "golden" or "rotation:p,q,d,r" for (p+q sqrt d)/r
std::variant<Rational, Quadratic> parse_mu(const std::string& s) {
  if (s == "golden") return Quadratic::golden_conjugate();
  if (s.rfind("rotation:", 0) == 0) {
    std::stringstream in(s.substr(9));
    std::string part;
    std::vector<Integer> v;
    while (std::getline(in, part, ',')) {
      Integer z;
      if (z.set_str(part, 10) != 0) throw Usage("bad rotation number '" + s + "'");
      v.push_back(z);
    }
    if (v.size() != 4) throw Usage("rotation needs p,q,d,r");
    return Quadratic{v[0], v[1], v[2], v[3]};
  }
  return parse_rational(s);
}

Rational rational_arg(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
    throw Usage("not a rational: '" + s + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Usage("cannot write " + path);
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file(path, text);
}

struct MapSource {
  std::string file;
  std::string base;  // "lambda,mu"

  void add(CLI::App* cmd) {
    cmd->add_option("--map", file, "map file written by construct");
    cmd->add_option("--base", base, "inline base map lambda,mu (mu: p/q, golden, rotation:p,q,d,r)");
  }
  MapHandle handle(const Global& g) const {
    if (!file.empty() && !base.empty()) throw Usage("give --map or --base, not both");
    if (!file.empty()) return deserialize_map(read_file(file));
    if (base.empty()) throw Usage("a map is required (--map or --base)");
    auto comma = base.find(',');
    if (comma == std::string::npos) throw Usage("--base expects lambda,mu");
    Rational lambda = rational_arg(base.substr(0, comma));
    std::variant<Rational, Quadratic> mu;
    try {
      mu = parse_mu(base.substr(comma + 1));
    } catch (const std::invalid_argument&) {
      throw Usage("bad mu '" + base.substr(comma + 1) + "'");
    }
    if (auto* q = std::get_if<Rational>(&mu)) return base_handle(lambda, *q);
    return sturmian_handle(lambda, std::get<Quadratic>(mu), g.refine_cap);
  }
};

// "p/q" (base coordinates), "left:j" = g_j(d_j), "right:j" = g_{j+1}(d_j)
struct SeedSpec {
  enum { value, left, right } kind;
  Rational x;
  std::size_t j = 0;
  std::string label;
};

SeedSpec parse_seed(const std::string& s) {
  for (const char* k : {"left:", "right:"}) {
    std::string key = k;
    if (s.rfind(key, 0) == 0) {
      std::size_t j = 0;
      try {
        j = std::stoul(s.substr(key.size()));
      } catch (const std::exception&) {
        throw Usage("bad seed '" + s + "'");
      }
      return SeedSpec{key == "left:" ? SeedSpec::left : SeedSpec::right, 0, j, s};
    }
  }
  return SeedSpec{SeedSpec::value, rational_arg(s), 0, s};
}

std::vector<SeedSpec> default_seeds(std::size_t pieces) {
  std::vector<SeedSpec> out;
  for (std::size_t j = 1; j < pieces; ++j) out.push_back(parse_seed("left:" + std::to_string(j)));
  for (std::size_t j = 1; j < pieces; ++j) out.push_back(parse_seed("right:" + std::to_string(j)));
  return out;
}

Real real_seed(const RealMap& m, const SeedSpec& s) {
  if (s.kind == SeedSpec::value) return Real(s.x);
  if (s.j < 1 || s.j >= m.pieces()) throw Usage("no interior breakpoint " + std::to_string(s.j));
  return m.branch(s.kind == SeedSpec::left ? s.j : s.j + 1)(m.breakpoint(s.j));
}

TaggedPoint tagged_seed(const ExtendedMap& em, const SeedSpec& s) {
  if (s.kind == SeedSpec::value) return plain(Real(s.x));
  if (s.j < 1 || s.j >= em.pieces()) throw Usage("no interior breakpoint " + std::to_string(s.j));
  return s.kind == SeedSpec::left ? em.left_limit(s.j) : em.right_limit(s.j);
}

int print_suite(const SuiteResult& s) {
  std::cout << suite_text(s);
  return s.ok() ? exit_ok : exit_reject;
}

// ---- commands ----

int cmd_verify(const std::string& lambda_s, const std::string& mu_s, std::size_t K, const Global& g) {
  Rational lambda = rational_arg(lambda_s);
  std::variant<Rational, Quadratic> mu;
  try {
    mu = parse_mu(mu_s);
  } catch (const std::invalid_argument&) {
    throw Usage("bad mu '" + mu_s + "'");
  }
  if (auto* q = std::get_if<Rational>(&mu)) {
    auto r = verify_no_periodic(lambda, *q, K);
    if (r.pass) {
      std::cout << "Pass K=" << K << "\n";
      return exit_ok;
    }
    std::cout << "Reject k=" << r.k << ", H_" << r.k << "=(" << to_string(r.left) << "," << to_string(r.right)
              << "), c=" << to_string(r.c) << "\n";
    return exit_reject;
  }
  RealMap m = build_sturmian_map(lambda, std::get<Quadratic>(mu), g.refine_cap);
  auto r = verify_no_periodic(m, K);
  if (r.pass) {
    std::cout << "Pass K=" << K << "  mu~" << m.branch(1).intercept.decimal() << "\n";
    return exit_ok;
  }
  std::cout << "Reject k=" << r.k << ", H_" << r.k << "=(" << r.left.decimal() << "," << r.right.decimal()
            << "), c=" << r.c.decimal() << "\n";
  return exit_reject;
}

struct ConstructArgs {
  std::size_t pieces = 3;
  std::string base;
  std::uint64_t seed = 1;
  std::string out, log;
  ConstructOptions opts;
};

int cmd_construct(const ConstructArgs& a, const Global& g) {
  if (a.pieces < 2) throw Usage("--pieces must be at least 2");
  MapSource src{"", a.base};
  MapHandle base = src.handle(g);
  MapHandle h;
  if (auto* mu = std::get_if<Rational>(&base.mu)) {
    auto r = verify_no_periodic(base.lambda, *mu, a.opts.verify_horizon);
    if (!r.pass) throw ConstructionFailed(0, "base rejected at k=" + std::to_string(r.k));
    if (a.pieces > 2) throw Usage("extensions need a rotation-number mu (golden or rotation:p,q,d,r)");
    h = base;
    LogRecord l;
    l.lambda = base.lambda;
    l.mu = to_string(*mu);
    l.horizons = {{"verify", r.k}};
    l.checks = {{"verify_no_periodic", r.k}};
    h.log.push_back(l);
  } else {
    ConstructOptions o = a.opts;
    o.seed = a.seed;
    o.refinement_cap = g.refine_cap;
    o.budget = g.budget;
    h = to_handle(construct_full_complexity(a.pieces, base.lambda, std::get<Quadratic>(base.mu), o));
  }
  std::string text = serialize_map(h);
  emit(a.out, text);
  if (!a.log.empty()) write_file(a.log, serialize_log(h));
  if (!a.out.empty() && a.out != "-")
    std::cerr << a.pieces << "-piece map written to " << a.out << " (" << h.log.size() << " log records)\n";
  return exit_ok;
}

struct SeriesArgs {
  MapSource src;
  std::vector<std::string> seeds;
  std::size_t T = 100000;
  std::size_t n_max = 30;
  std::string out_dir;
  bool expect_full = false;
};

int cmd_complexity(const SeriesArgs& a, const Global& g) {
  RealizedMap rm = realize(a.src.handle(g));
  const std::size_t N = rm.pieces();
  std::vector<SeedSpec> seeds;
  for (const auto& s : a.seeds) seeds.push_back(parse_seed(s));
  if (seeds.empty()) seeds = default_seeds(N);
  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);
  std::optional<AffineFit> expect;
  if (a.expect_full) expect = AffineFit{static_cast<std::int64_t>(N) - 1, 1, 1, 0};
  int status = exit_ok;
  std::size_t k = 0;
  for (const auto& s : seeds) {
    ++k;
    SeedRun run;
    if (rm.cuts.empty()) {
      MapSystem<Real> sys{rm.base.get()};
      MapDynamics<Real> dyn{rm.base.get()};
      run = run_seed(sys, dyn, real_seed(*rm.base, s), s.label, a.T, a.n_max);
    } else {
      ExtendedMap em = rm.extended();
      run = run_seed(em, em, tagged_seed(em, s), s.label, a.T, a.n_max);
    }
    std::cout << describe(run) << "\n";
    for (const auto& l : complexity_checks(run, N, expect)) {
      if (l.name == "fit") continue;
      std::cout << "  " << l.name << ' ' << (l.pass ? "PASS" : "FAIL") << "  " << l.detail << "\n";
    }
    if (!a.out_dir.empty()) write_file(a.out_dir + "/complexity_seed" + std::to_string(k) + ".csv", complexity_csv(run));
    if (!run.fit) status = std::max(status, exit_unstable);
    else if (expect && !complexity_checks(run, N, expect).front().pass && status == exit_ok) status = exit_reject;
  }
  return status;
}

struct AtomArgs {
  MapSource src;
  std::size_t depth = 5;
  std::string out, svg;
};

std::vector<IntervalRow> atom_rows(const RealizedMap& rm, std::size_t depth, std::size_t budget, bool merged) {
  std::vector<IntervalRow> rows;
  if (rm.cuts.empty()) {
    MapSystem<Real> sys{rm.base.get()};
    std::vector<Atom<Real>> gen{Atom<Real>{{}, {rm.base->lo(), rm.base->hi()}}};
    for (std::size_t n = 1; n <= depth; ++n) {
      gen = next_generation(sys, gen, budget);
      if (!merged) {
        if (n == depth)
          for (const auto& a : gen) rows.push_back(row(n, a.word, a.iv));
        continue;
      }
      for (const auto& iv : union_of(sys, gen, n).intervals) rows.push_back(row(n, {}, iv));
    }
    return rows;
  }
  ExtendedMap em = rm.extended();
  std::vector<TaggedAtom> gen{TaggedAtom{{}, {em.breakpoint(0), em.breakpoint(em.pieces())}}};
  for (std::size_t n = 1; n <= depth; ++n) {
    gen = next_generation(em, gen, budget);
    if (!merged) {
      if (n == depth)
        for (const auto& a : gen) rows.push_back(row(em, n, a.word, a.iv));
      continue;
    }
    for (const auto& iv : union_of(em, gen, n).intervals) rows.push_back(row(em, n, {}, iv));
  }
  return rows;
}

std::pair<double, double> drawing_range(const RealizedMap& rm) {
  double lo = rm.base->lo().approx(), hi = rm.base->hi().approx();
  if (!rm.cuts.empty()) {
    double lambda = rm.base->branch(1).slope.get_d();
    hi += static_cast<double>(rm.cuts.size()) * lambda / (1 - lambda);
  }
  return {lo, hi};
}

int cmd_atoms(const AtomArgs& a, const Global& g) {
  RealizedMap rm = realize(a.src.handle(g));
  auto rows = atom_rows(rm, a.depth, g.budget, false);
  if (g.format == "svg") {
    auto [lo, hi] = drawing_range(rm);
    emit(a.out, attractor_svg(rows, lo, hi));
  } else {
    emit(a.out, atoms_csv(rows));
  }
  return exit_ok;
}

int cmd_attractor(const AtomArgs& a, const Global& g) {
  RealizedMap rm = realize(a.src.handle(g));
  auto rows = atom_rows(rm, a.depth, g.budget, true);
  auto [lo, hi] = drawing_range(rm);
  if (g.format == "svg") emit(a.out, attractor_svg(rows, lo, hi));
  else emit(a.out, attractor_csv(rows));
  if (!a.svg.empty()) write_file(a.svg, attractor_svg(rows, lo, hi));
  return exit_ok;
}

struct CheckArgs {
  MapSource src;
  std::string suite = "all";
  std::size_t depth = 10;
  std::size_t steps = 1000;
  std::size_t T = 10000;
  std::size_t horizon = 1000;
  std::string seed = "1/3";
};

int cmd_check(const CheckArgs& a, const Global& g) {
  static const std::vector<std::string> known{"atoms", "cross", "conjugacy", "phi", "stages",
                                              "lambda_g", "complexity", "minimality", "all"};
  if (std::find(known.begin(), known.end(), a.suite) == known.end()) throw Usage("unknown suite '" + a.suite + "'");
  RealizedMap rm = realize(a.src.handle(g));
  const bool all = a.suite == "all";
  int status = exit_ok;
  auto run = [&](const SuiteResult& s) { status = std::max(status, print_suite(s)); };
  const bool extended = !rm.cuts.empty();
  auto need_extension = [&](const std::string& name) {
    if (!extended && !all) throw Usage("suite " + name + " needs an extended map");
    return extended;
  };

  if (all || a.suite == "atoms") {
    if (extended) {
      SuiteResult s{"atoms", {}};
      s.skip("atoms", "full atom towers are computed for base maps; use the stages and lambda_g suites");
      run(s);
    } else {
      run(atom_suite(*rm.base, a.depth, a.T, real_seed(*rm.base, parse_seed(a.seed)), g.budget));
    }
  }
  if ((all && !extended) || a.suite == "cross") {
    if (extended) throw Usage("suite cross runs on base maps");
    run(cross_oracle_suite(*rm.base, real_seed(*rm.base, parse_seed(a.seed)), a.T, std::min<std::size_t>(a.depth, 10),
                           g.budget));
  }
  if ((all || a.suite == "conjugacy") && need_extension("conjugacy")) run(conjugacy_suite(rm.extended(), a.steps));
  if ((all || a.suite == "phi") && need_extension("phi")) run(phi_suite(rm.extended(), 60, a.horizon));
  if ((all || a.suite == "stages") && need_extension("stages")) run(stage_suite(rm.extended(), g.budget));
  if ((all || a.suite == "lambda_g") && need_extension("lambda_g"))
    run(lambda_g_suite(rm.extended(), std::min<std::size_t>(a.depth, 6), g.budget));
  if (all || a.suite == "complexity" || a.suite == "minimality") {
    SuiteResult s{a.suite == "minimality" ? "minimality" : "complexity", {}};
    const std::size_t N = rm.pieces();
    std::optional<ExtendedMap> em;
    if (extended) em = rm.extended();
    for (const auto& spec : default_seeds(N)) {
      AtomVisits visits(*rm.base, 8, g.budget);
      SeedRun r;
      if (extended) {
        r = run_seed(*em, *em, tagged_seed(*em, spec), spec.label, a.T, 30,
                     [&](std::size_t, const TaggedPoint& p) { visits.observe(p); });
      } else {
        MapSystem<Real> sys{rm.base.get()};
        MapDynamics<Real> dyn{rm.base.get()};
        r = run_seed(sys, dyn, real_seed(*rm.base, spec), spec.label, a.T, 30,
                     [&](std::size_t, const Real& x) { visits.observe(plain(x)); });
      }
      if (a.suite != "minimality")
        for (auto& l : complexity_checks(r, N)) s.add(spec.label + " " + l.name, l.pass, l.detail);
      if (a.suite != "complexity")
        s.add(spec.label + " atom_visits", visits.visited() == visits.atoms(),
              std::to_string(visits.visited()) + "/" + std::to_string(visits.atoms()) + " generation-8 base atoms, T=" +
                  std::to_string(r.itinerary.size()));
    }
    run(s);
  }
  return status;
}

int cmd_itinerary(const MapSource& src, const std::string& seed, std::size_t T, const Global& g) {
  RealizedMap rm = realize(src.handle(g));
  SeedSpec s = parse_seed(seed);
  Itinerary it;
  if (rm.cuts.empty()) {
    MapDynamics<Real> dyn{rm.base.get()};
    it = itinerary(dyn, real_seed(*rm.base, s), T, seed);
  } else {
    ExtendedMap em = rm.extended();
    it = itinerary(em, tagged_seed(em, s), T, seed);
  }
  std::cout << to_string(it.symbols) << "\n";
  if (it.truncation == Truncation::boundary_hit)
    std::cerr << "orbit meets a discontinuity at t=" << it.boundary_time << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise contracting interval maps: verification, construction and complexity"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--budget", g.budget, "atom/interval budget")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--refine-cap", g.refine_cap, "refinement cap for lazy points and mu enclosures")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  app.set_config("--config", "", "TOML/INI file with option values");

  std::string v_lambda, v_mu;
  std::size_t v_horizon = 10000;
  auto* verify = app.add_subcommand("verify", "finite-horizon no-periodic-orbit test of a base map");
  verify->add_option("--lambda", v_lambda)->required();
  verify->add_option("--mu", v_mu, "p/q, golden, or rotation:p,q,d,r")->required();
  verify->add_option("--horizon", v_horizon)->capture_default_str();

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build a full-complexity map with the given number of pieces");
  construct->add_option("--pieces", ca.pieces)->capture_default_str();
  construct->add_option("--base", ca.base, "lambda,mu")->required();
  construct->add_option("--seed", ca.seed)->capture_default_str();
  construct->add_option("--out", ca.out, "map file (default stdout)");
  construct->add_option("--log", ca.log, "also write the construction log here");
  construct->add_option("--verify-horizon", ca.opts.verify_horizon)->capture_default_str();
  construct->add_option("--exclusion-horizon", ca.opts.exclusion_horizon)->capture_default_str();
  construct->add_option("--max-candidates", ca.opts.max_candidates)->capture_default_str();

  SeriesArgs sa;
  auto* complexity_cmd = app.add_subcommand("complexity", "itinerary complexity tables and affine fits");
  sa.src.add(complexity_cmd);
  complexity_cmd->add_option("--seed-point", sa.seeds, "p/q, left:j or right:j (default: all one-sided images)");
  complexity_cmd->add_option("-T,--length", sa.T)->capture_default_str();
  complexity_cmd->add_option("--n-max", sa.n_max)->capture_default_str();
  complexity_cmd->add_option("--out-dir", sa.out_dir, "one CSV per seed");
  complexity_cmd->add_flag("--expect-full", sa.expect_full, "require alpha=N-1, beta=1, m0=1");

  AtomArgs aa;
  auto* atoms_cmd = app.add_subcommand("atoms", "atoms of one generation");
  aa.src.add(atoms_cmd);
  atoms_cmd->add_option("--depth", aa.depth)->capture_default_str();
  atoms_cmd->add_option("--out", aa.out);

  AtomArgs ta;
  auto* attractor_cmd = app.add_subcommand("attractor", "Lambda_1..Lambda_n as interval lists");
  ta.src.add(attractor_cmd);
  attractor_cmd->add_option("--depth", ta.depth)->capture_default_str();
  attractor_cmd->add_option("--out", ta.out);
  attractor_cmd->add_option("--svg", ta.svg, "also draw the stacked bars here");

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "run invariant suites");
  ka.src.add(check);
  check->add_option("--suite", ka.suite, "atoms, cross, conjugacy, phi, stages, lambda_g, complexity, minimality, all")
      ->capture_default_str();
  check->add_option("--depth", ka.depth)->capture_default_str();
  check->add_option("--steps", ka.steps)->capture_default_str();
  check->add_option("-T,--length", ka.T)->capture_default_str();
  check->add_option("--horizon", ka.horizon)->capture_default_str();
  check->add_option("--seed-point", ka.seed)->capture_default_str();

  MapSource ia;
  std::string i_seed;
  std::size_t i_T = 100;
  auto* itin = app.add_subcommand("itinerary", "symbol sequence of one orbit");
  ia.add(itin);
  itin->add_option("--seed-point", i_seed)->required();
  itin->add_option("-T,--length", i_T)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*verify) return cmd_verify(v_lambda, v_mu, v_horizon, g);
    if (*construct) return cmd_construct(ca, g);
    if (*complexity_cmd) return cmd_complexity(sa, g);
    if (*atoms_cmd) return cmd_atoms(aa, g);
    if (*attractor_cmd) return cmd_attractor(ta, g);
    if (*check) return cmd_check(ka, g);
    if (*itin) return cmd_itinerary(ia, i_seed, i_T, g);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return exit_usage;
  } catch (const ParameterOutOfRange& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const OutOfDomain& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "exhausted: " << e.what() << "\n";
    return exit_exhausted;
  } catch (const RefinementExhausted& e) {
    std::cerr << "exhausted: " << e.what() << "\n";
    return exit_exhausted;
  } catch (const PrefixTooShort& e) {
    std::cerr << "not stabilized: " << e.what() << "\n";
    return exit_unstable;
  } catch (const Error& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return exit_reject;
  }
  return exit_usage;
}

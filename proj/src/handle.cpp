#include "pcm/handle.hpp"

#include <cstdio>
#include <initializer_list>
#include <set>

#include "json.hpp"

namespace pcm {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* format_tag = "pcmap/1";

std::string kind_name(MapHandle::Kind k) {
  switch (k) {
    case MapHandle::Kind::pamap: return "pamap";
    case MapHandle::Kind::base: return "base";
    case MapHandle::Kind::extended: return "extended";
  }
  return "base";
}

json pairs_json(const std::vector<std::pair<std::string, std::size_t>>& v) {
  json o = json::object();
  for (const auto& [k, n] : v) o[k] = n;
  return o;
}

json rotation_json(const Quadratic& q) {
  json r;
  r["p"] = q.p.get_str();
  r["q"] = q.q.get_str();
  r["d"] = q.d.get_str();
  r["r"] = q.r.get_str();
  return json{{"rotation", r}};
}

std::string mu_text(const std::variant<Rational, Quadratic>& mu) {
  if (auto* q = std::get_if<Rational>(&mu)) return to_string(*q);
  return "mu(" + std::get<Quadratic>(mu).str() + ")";
}

json to_json(const MapHandle& h, bool with_log) {
  json j;
  j["format"] = format_tag;
  j["kind"] = kind_name(h.kind);
  switch (h.kind) {
    case MapHandle::Kind::pamap: {
      json c = json::array(), b = json::array(), p = json::array();
      for (const auto& x : h.pamap.breakpoints()) c.push_back(to_string(x));
      for (const auto& br : h.pamap.branches())
        b.push_back(json{{"slope", to_string(br.slope)}, {"intercept", to_string(br.intercept)}});
      for (auto pol : h.pamap.policies()) p.push_back(to_string(pol));
      j["breakpoints"] = c;
      j["branches"] = b;
      j["policies"] = p;
      break;
    }
    case MapHandle::Kind::base:
      j["lambda"] = to_string(h.lambda);
      if (auto* q = std::get_if<Rational>(&h.mu)) {
        j["mu"] = to_string(*q);
      } else {
        j["mu"] = rotation_json(std::get<Quadratic>(h.mu));
        j["term_cap"] = h.term_cap;
      }
      break;
    case MapHandle::Kind::extended: {
      j["parent"] = to_json(*h.parent, false);
      const CutDescriptor& c = h.cut;
      json cj;
      cj["level"] = c.level;
      cj["seed"] = c.seed;
      cj["candidate"] = c.candidate;
      cj["angle"] = to_string(c.angle);
      cj["exclusion_horizon"] = c.exclusion_horizon;
      cj["refinement_cap"] = c.refinement_cap;
      cj["clean_atom"] = c.clean_atom;
      cj["j0"] = c.j0;
      cj["address"] = c.address;
      cj["checks"] = pairs_json(c.checks);
      j["cut"] = cj;
      break;
    }
  }
  if (with_log && !h.log.empty()) {
    json l = json::array();
    for (const auto& r : h.log) {
      json rj;
      rj["stage"] = r.stage;
      rj["lambda"] = to_string(r.lambda);
      if (!r.mu.empty()) rj["mu"] = r.mu;
      if (!r.parent_hash.empty()) rj["parent_hash"] = r.parent_hash;
      if (!r.address.empty()) rj["address"] = r.address;
      rj["horizons"] = pairs_json(r.horizons);
      rj["checks"] = pairs_json(r.checks);
      l.push_back(rj);
    }
    j["log"] = l;
  }
  return j;
}

// JSON reader that tracks a pointer path for error messages
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  void object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) throw ParseError(path_ + "/" + it.key(), "unknown field");
  }
  bool has(const char* key) const { return j_.contains(key); }
  Reader at(const char* key) const {
    if (!j_.contains(key)) throw ParseError(path_ + "/" + key, "missing field");
    return Reader(j_.at(key), path_ + "/" + key);
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::uint64_t uint() const {
    if (!j_.is_number_unsigned()) fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }
  Rational rational() const {
    try {
      return parse_rational(str());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  Integer integer() const {
    Integer z;
    if (z.set_str(str(), 10) != 0) fail("expected a decimal integer string");
    return z;
  }
  std::vector<Reader> array() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "/" + std::to_string(i));
    return out;
  }
  std::vector<std::pair<std::string, std::size_t>> pairs() const {
    if (!j_.is_object()) fail("expected an object");
    std::vector<std::pair<std::string, std::size_t>> out;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      out.emplace_back(it.key(), Reader(it.value(), path_ + "/" + it.key()).uint());
    return out;
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_.empty() ? "/" : path_, what); }

 private:
  const json& j_;
  std::string path_;
};

MapHandle from_json(const Reader& r, bool top) {
  r.object({"format", "kind", "breakpoints", "branches", "policies", "lambda", "mu", "term_cap", "parent", "cut", "log"});
  if (r.at("format").str() != format_tag) r.at("format").fail("unsupported format");
  const std::string kind = r.at("kind").str();
  auto allow = [&](std::initializer_list<const char*> keys) {
    std::set<std::string> ok{"format", "kind", "log"};
    ok.insert(keys.begin(), keys.end());
    for (auto it = r.raw().begin(); it != r.raw().end(); ++it)
      if (!ok.count(it.key())) throw ParseError(r.path() + "/" + it.key(), "field not allowed for kind " + kind);
  };
  MapHandle h;
  if (kind == "pamap") {
    allow({"breakpoints", "branches", "policies"});
    h.kind = MapHandle::Kind::pamap;
    std::vector<Rational> c;
    std::vector<Branch<Rational>> b;
    std::vector<BoundaryPolicy> p;
    for (const auto& x : r.at("breakpoints").array()) c.push_back(x.rational());
    for (const auto& x : r.at("branches").array()) {
      x.object({"slope", "intercept"});
      b.push_back({x.at("slope").rational(), x.at("intercept").rational()});
    }
    for (const auto& x : r.at("policies").array()) {
      try {
        p.push_back(parse_policy(x.str()));
      } catch (const std::invalid_argument& e) {
        x.fail(e.what());
      }
    }
    if (c.size() != b.size() + 1 || p.size() + 1 != b.size() || b.empty())
      r.fail("need N+1 breakpoints, N branches and N-1 policies");
    h.pamap = PAMap(std::move(c), std::move(b), std::move(p));
  } else if (kind == "base") {
    h.kind = MapHandle::Kind::base;
    h.lambda = r.at("lambda").rational();
    Reader mu = r.at("mu");
    if (mu.raw().is_string()) {
      allow({"lambda", "mu"});
      h.mu = mu.rational();
    } else {
      allow({"lambda", "mu", "term_cap"});
      mu.object({"rotation"});
      Reader rot = mu.at("rotation");
      rot.object({"p", "q", "d", "r"});
      Quadratic q{rot.at("p").integer(), rot.at("q").integer(), rot.at("d").integer(), rot.at("r").integer()};
      if (q.r <= 0 || q.d <= 1) rot.fail("need r > 0 and d > 1");
      Integer s = sqrt(q.d);
      if (s * s == q.d) rot.at("d").fail("d must not be a perfect square");
      h.mu = q;
      h.term_cap = r.at("term_cap").uint();
    }
  } else if (kind == "extended") {
    allow({"parent", "cut"});
    h.kind = MapHandle::Kind::extended;
    h.parent = std::make_shared<const MapHandle>(from_json(r.at("parent"), false));
    Reader c = r.at("cut");
    c.object({"level", "seed", "candidate", "angle", "exclusion_horizon", "refinement_cap", "clean_atom", "j0",
              "address", "checks"});
    CutDescriptor& d = h.cut;
    d.level = c.at("level").uint();
    d.seed = c.at("seed").uint();
    d.candidate = c.at("candidate").uint();
    d.angle = c.at("angle").rational();
    d.exclusion_horizon = c.at("exclusion_horizon").uint();
    d.refinement_cap = c.at("refinement_cap").uint();
    d.clean_atom = c.at("clean_atom").uint();
    d.j0 = c.at("j0").uint();
    d.address = c.at("address").str();
    d.checks = c.at("checks").pairs();
    const MapHandle& root = h.parent->root();
    if (root.kind != MapHandle::Kind::base || !root.sturmian())
      r.at("parent").fail("extensions need a base map with a rotation-number mu");
    const std::size_t expect = h.parent->kind == MapHandle::Kind::extended ? h.parent->cut.level + 1 : 1;
    if (d.level != expect) c.at("level").fail("expected level " + std::to_string(expect));
  } else {
    r.at("kind").fail("unknown kind '" + kind + "'");
  }
  if (r.has("log")) {
    if (!top) r.at("log").fail("log only allowed at the top level");
    for (const auto& x : r.at("log").array()) {
      x.object({"stage", "lambda", "mu", "parent_hash", "address", "horizons", "checks"});
      LogRecord l;
      l.stage = x.at("stage").uint();
      l.lambda = x.at("lambda").rational();
      if (x.has("mu")) l.mu = x.at("mu").str();
      if (x.has("parent_hash")) l.parent_hash = x.at("parent_hash").str();
      if (x.has("address")) l.address = x.at("address").str();
      l.horizons = x.at("horizons").pairs();
      l.checks = x.at("checks").pairs();
      h.log.push_back(std::move(l));
    }
  }
  return h;
}

}  // namespace

std::size_t MapHandle::pieces() const {
  switch (kind) {
    case Kind::pamap: return pamap.pieces();
    case Kind::base: return 2;
    case Kind::extended: return parent->pieces() + 1;
  }
  return 0;
}

bool operator==(const MapHandle& a, const MapHandle& b) {
  if (a.kind != b.kind || !(a.log == b.log)) return false;
  switch (a.kind) {
    case MapHandle::Kind::pamap: return a.pamap == b.pamap;
    case MapHandle::Kind::base: return a.lambda == b.lambda && a.mu == b.mu && a.term_cap == b.term_cap;
    case MapHandle::Kind::extended: return a.cut == b.cut && *a.parent == *b.parent;
  }
  return false;
}

MapHandle base_handle(const Rational& lambda, const Rational& mu) {
  build_base_map(lambda, mu);
  MapHandle h;
  h.lambda = lambda;
  h.mu = mu;
  return h;
}

MapHandle sturmian_handle(const Rational& lambda, const Quadratic& rho, std::size_t term_cap) {
  MapHandle h;
  h.lambda = lambda;
  h.mu = rho;
  h.term_cap = term_cap;
  return h;
}

MapHandle pamap_handle(PAMap m) {
  MapHandle h;
  h.kind = MapHandle::Kind::pamap;
  h.pamap = std::move(m);
  return h;
}

MapHandle to_handle(const Construction& c) {
  MapHandle h = sturmian_handle(c.lambda, c.rho, c.term_cap);
  std::vector<LogRecord> log;
  LogRecord l0;
  l0.stage = 0;
  l0.lambda = c.lambda;
  l0.mu = mu_text(h.mu);
  l0.horizons = {{"verify", c.verified.k}, {"term_cap", c.term_cap}};
  l0.checks = {{"verify_no_periodic", c.verified.k}};
  if (!c.stages.empty()) l0.checks.push_back({"n0", c.stages[0].n0});
  log.push_back(l0);
  std::vector<std::shared_ptr<const CutOrbit>> cuts;
  for (std::size_t k = 0; k < c.cuts.size(); ++k) {
    const auto& cut = c.cuts[k];
    cuts.push_back(cut);
    ExtendedMap em(c.base, cuts);
    MapHandle e;
    e.kind = MapHandle::Kind::extended;
    e.parent = std::make_shared<const MapHandle>(h);
    CutDescriptor& d = e.cut;
    const CutRecord& rec = cut->record();
    d.level = rec.level;
    d.seed = rec.seed;
    d.candidate = rec.candidate;
    d.angle = cut->xi0().angle();
    d.exclusion_horizon = rec.exclusion_horizon;
    d.refinement_cap = cut->xi0().cap();
    d.clean_atom = rec.clean_atom;
    d.j0 = em.j0();
    d.address = to_string(cut->xi0().address(64));
    d.checks = rec.checks;
    LogRecord l;
    l.stage = k + 1;
    l.lambda = c.lambda;
    l.parent_hash = fnv1a_hex(serialize_map(h, false));
    l.address = d.address;
    l.horizons = {{"exclusion", d.exclusion_horizon}, {"refinement_cap", d.refinement_cap}};
    l.checks = d.checks;
    if (k + 1 < c.stages.size()) {
      l.checks.push_back({"n0", c.stages[k + 1].n0});
      l.checks.push_back({"gen1_disjoint", c.stages[k + 1].disjoint ? 1u : 0u});
    }
    log.push_back(std::move(l));
    h = std::move(e);
  }
  h.log = std::move(log);
  return h;
}

std::string serialize_map(const MapHandle& h, bool with_log) { return to_json(h, with_log).dump(2) + "\n"; }

std::string serialize_log(const MapHandle& h) {
  json j = to_json(h, true);
  return (j.contains("log") ? j["log"] : json::array()).dump(2) + "\n";
}

MapHandle deserialize_map(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  return from_json(Reader(j, ""), true);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RealizedMap realize(const MapHandle& h) {
  RealizedMap out;
  switch (h.kind) {
    case MapHandle::Kind::pamap:
      out.rational = std::make_shared<const PAMap>(h.pamap);
      out.base = std::make_shared<const RealMap>(to_real(h.pamap));
      return out;
    case MapHandle::Kind::base:
      if (auto* mu = std::get_if<Rational>(&h.mu)) {
        out.rational = std::make_shared<const PAMap>(build_base_map(h.lambda, *mu));
        out.base = std::make_shared<const RealMap>(to_real(*out.rational));
      } else {
        out.base = std::make_shared<const RealMap>(build_sturmian_map(h.lambda, std::get<Quadratic>(h.mu), h.term_cap));
      }
      return out;
    case MapHandle::Kind::extended: break;
  }
  out = realize(*h.parent);
  const CutDescriptor& d = h.cut;
  const Quadratic& rho = std::get<Quadratic>(h.root().mu);
  CutRecord rec{d.level, d.seed, d.candidate, d.exclusion_horizon, d.clean_atom, d.checks};
  auto cut = std::make_shared<CutOrbit>(out.base, LazyPoint(out.base, rho, d.angle, d.refinement_cap), rec);
  if (to_string(cut->xi0().address(64)) != d.address)
    throw CheckFailed("cut " + std::to_string(d.level) + " does not reproduce its recorded address");
  out.cuts.push_back(cut);
  if (out.extended().j0() != d.j0)
    throw CheckFailed("cut " + std::to_string(d.level) + " does not reproduce j0 = " + std::to_string(d.j0));
  return out;
}

}  // namespace pcm

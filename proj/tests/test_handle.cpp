#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcm/handle.hpp"

using namespace pcm;

namespace {
const Rational half(1, 2);

Construction build(std::size_t n) {
  ConstructOptions o;
  o.seed = 7;
  return construct_full_complexity(n, half, Quadratic::golden_conjugate(), o);
}

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto p = text.find(what); p != std::string::npos; p = text.find(what, p + 1)) ++n;
  return n;
}

std::string position_of(const std::string& text) {
  try {
    deserialize_map(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  return "";
}
}  // namespace

TEST_CASE("base handle round trip") {
  MapHandle h = base_handle(half, Rational(3, 5));
  std::string text = serialize_map(h);
  CHECK(text.find("\"mu\": \"3/5\"") != std::string::npos);
  CHECK(text.find("\"lambda\": \"1/2\"") != std::string::npos);
  MapHandle back = deserialize_map(text);
  CHECK(back == h);
  CHECK(serialize_map(back) == text);
  auto rm = realize(back);
  REQUIRE(rm.rational);
  CHECK(*rm.rational == build_base_map(half, Rational(3, 5)));
}

TEST_CASE("pamap handle round trip") {
  PAMap m({0, Rational(2, 5), Rational(3, 5), 1},
          {{Rational(1, 10), 0}, {Rational(1, 10), Rational(43, 50)}, {Rational(9, 10), Rational(-6, 25)}},
          {BoundaryPolicy::left_limit, BoundaryPolicy::undefined});
  MapHandle h = pamap_handle(m);
  MapHandle back = deserialize_map(serialize_map(h));
  CHECK(back == h);
  CHECK(back.pamap.policy(2) == BoundaryPolicy::undefined);
  CHECK(back.pieces() == 3);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(deserialize_map("{}"), ParseError);
  CHECK(position_of("{}") == "/format");
  CHECK(position_of("{\"format\": \"pcmap/1\", ") .rfind("byte", 0) == 0);
  CHECK(position_of(R"({"format":"pcmap/1","kind":"base","lambda":"1/2","mu":"3/5","extra":1})") == "/extra");
  CHECK(position_of(R"({"format":"pcmap/1","kind":"base","lambda":"1/x","mu":"3/5"})") == "/lambda");
  CHECK(position_of(R"({"format":"pcmap/1","kind":"base","lambda":"1/2","mu":{"rotation":{"p":"0","q":"1","d":"4","r":"2"}},"term_cap":10})") ==
        "/mu/rotation/d");
  CHECK(position_of(R"({"format":"pcmap/2","kind":"base","lambda":"1/2","mu":"3/5"})") == "/format");
  CHECK(position_of(R"({"format":"pcmap/1","kind":"pamap","breakpoints":["0","1"],"branches":[],"policies":[]})") ==
        "/");
}

TEST_CASE("extended handles") {
  Construction c = build(4);
  MapHandle h = to_handle(c);
  CHECK(h.pieces() == 4);
  std::string text = serialize_map(h);
  // depth-2 extension: two nested parent records
  CHECK(count(text, "\"parent\"") == 2);
  CHECK(count(text, "\"cut\"") == 2);
  MapHandle back = deserialize_map(text);
  CHECK(back == h);
  CHECK(serialize_map(back) == text);
  REQUIRE(back.log.size() == 3);
  CHECK(back.log[1].parent_hash == fnv1a_hex(serialize_map(*back.parent->parent, false)));
  CHECK(back.log[2].parent_hash == fnv1a_hex(serialize_map(*back.parent, false)));

  RealizedMap rm = realize(back);
  CHECK(rm.pieces() == 4);
  ExtendedMap em = rm.extended();
  ExtendedMap orig = c.map();
  // replayed cuts are new objects for the same points: compare structure, not by refinement
  for (std::size_t i = 0; i <= em.pieces(); ++i) {
    const auto &a = em.breakpoint_info(i), &b = orig.breakpoint_info(i);
    CHECK(a.kind == b.kind);
    CHECK(a.index == b.index);
    if (a.kind == ExtendedMap::Kind::cut)
      CHECK(rm.cuts[a.index - 1]->xi0().angle() == c.cuts[b.index - 1]->xi0().angle());
    else
      CHECK(std::get<Real>(a.point.pos) == std::get<Real>(b.point.pos));
  }
  CHECK(em.j0() == orig.j0());

  // replay is bit-for-bit
  CHECK(serialize_map(to_handle(build(4))) == text);
}

TEST_CASE("tampered cut is caught on replay") {
  MapHandle h = to_handle(build(3));
  std::string text = serialize_map(h);
  auto at = text.find("\"angle\": \"");
  REQUIRE(at != std::string::npos);
  std::string bad = text;
  bad.replace(at, 10, "\"angle\": \"1");  // prefix a digit to the numerator
  CHECK_THROWS_AS(realize(deserialize_map(bad)), CheckFailed);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

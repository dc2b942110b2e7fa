#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcm/construct.hpp"
#include "pcm/pamap.hpp"

namespace pcm {

// Everything needed to rebuild a cut orbit bit for bit.
struct CutDescriptor {
  std::size_t level = 0;
  std::uint64_t seed = 0;
  std::size_t candidate = 0;
  Rational angle;
  std::size_t exclusion_horizon = 0;
  std::size_t refinement_cap = 0;
  std::size_t clean_atom = 0;
  std::size_t j0 = 0;
  std::string address;  // first 64 address symbols, checked on replay
  std::vector<std::pair<std::string, std::size_t>> checks;

  bool operator==(const CutDescriptor&) const = default;
};

struct LogRecord {
  std::size_t stage = 0;
  Rational lambda;
  std::string mu;           // stage 0
  std::string parent_hash;  // later stages, FNV-1a of the serialized parent
  std::string address;
  std::vector<std::pair<std::string, std::size_t>> horizons;
  std::vector<std::pair<std::string, std::size_t>> checks;

  bool operator==(const LogRecord&) const = default;
};

// Recursive map description: a general rational map, a base-family map
// (rational mu, or mu(lambda, rho) for a quadratic rotation number rho), or
// an extension of a parent handle by one cut orbit.
struct MapHandle {
  enum class Kind { pamap, base, extended };

  Kind kind = Kind::base;
  PAMap pamap;
  Rational lambda;
  std::variant<Rational, Quadratic> mu;
  std::size_t term_cap = 0;
  std::shared_ptr<const MapHandle> parent;
  CutDescriptor cut;
  std::vector<LogRecord> log;

  std::size_t pieces() const;
  bool sturmian() const { return std::holds_alternative<Quadratic>(mu); }
  // innermost base handle
  const MapHandle& root() const { return parent ? parent->root() : *this; }
};

bool operator==(const MapHandle& a, const MapHandle& b);

MapHandle base_handle(const Rational& lambda, const Rational& mu);
MapHandle sturmian_handle(const Rational& lambda, const Quadratic& rho, std::size_t term_cap);
MapHandle pamap_handle(PAMap m);
MapHandle to_handle(const Construction& c);

// JSON text; key order and layout are fixed so output is byte-stable
std::string serialize_map(const MapHandle& h, bool with_log = true);
// ParseError with a byte offset or a JSON pointer to the offending field
MapHandle deserialize_map(const std::string& text);
// the construction log alone, as a JSON array
std::string serialize_log(const MapHandle& h);

std::string fnv1a_hex(const std::string& bytes);

struct RealizedMap {
  std::shared_ptr<const PAMap> rational;  // set for pamap and rational-mu base handles
  std::shared_ptr<const RealMap> base;
  std::vector<std::shared_ptr<const CutOrbit>> cuts;

  std::size_t pieces() const { return base->pieces() + cuts.size(); }
  ExtendedMap extended() const { return ExtendedMap(base, cuts); }
};

// Rebuilds maps and cut orbits.  CheckFailed when a replayed cut does not
// reproduce its recorded address or j0.
RealizedMap realize(const MapHandle& h);

}  // namespace pcm

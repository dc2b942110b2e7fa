#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcm/lazy.hpp"

namespace pcm {

// base-space position: exact value or a point of a cut orbit
using Position = std::variant<Real, OrbitRef>;

// Comparison of positions, refining lazy points until their enclosures
// separate.  Distinct positions never coincide for a well-cutting orbit, so
// equality is structural; a genuine coincidence ends in RefinementExhausted.
std::strong_ordering compare_positions(const Position& a, const Position& b);
Interval<Real> enclose(const Position& p, std::size_t depth);
Estimate estimate(const Position& p);
std::string to_string(const Position& p);

// Point of the phase space of an extended map after k insertions.  Later
// insertions act as translations on earlier gaps, so one flat layer suffices:
//   level == 0  -> Plain: the image of base position pos under all phi's,
//   level == j  -> Gap: phi(xi^{(j)}_r) + offset inside G^{(j)}_r, r = pos.t.
struct TaggedPoint {
  Position pos;
  std::size_t level = 0;
  Rational offset = 0;

  bool is_gap() const { return level != 0; }
  std::size_t r() const { return std::get<OrbitRef>(pos).t; }
};

std::strong_ordering compare(const TaggedPoint& a, const TaggedPoint& b);
inline bool operator<(const TaggedPoint& a, const TaggedPoint& b) { return compare(a, b) < 0; }
// structural equality; never refines
bool identical(const TaggedPoint& a, const TaggedPoint& b);
std::string to_string(const TaggedPoint& p);

inline TaggedPoint plain(Real x) { return TaggedPoint{Position(std::move(x)), 0, 0}; }
inline TaggedPoint plain(OrbitRef r) { return TaggedPoint{Position(std::move(r)), 0, 0}; }
TaggedPoint gap_point(const std::shared_ptr<const CutOrbit>& cut, std::size_t r, const Rational& offset);

// The (N+k)-piece map obtained from a 2-piece Sturmian (or any uniform-slope)
// base by k successive well-cutting insertions.  With no cuts it is the base
// map itself in tagged form.  Satisfies the system and dynamics interfaces of
// atoms.hpp / symbolic.hpp.
class ExtendedMap {
 public:
  using point_type = TaggedPoint;

  enum class Kind { domain_lo, domain_hi, base_breakpoint, cut };
  struct Breakpoint {
    TaggedPoint point;
    Kind kind;
    std::size_t index;  // base breakpoint index or cut level
  };

  ExtendedMap(std::shared_ptr<const RealMap> base, std::vector<std::shared_ptr<const CutOrbit>> cuts);

  std::size_t pieces() const { return bps_.size() - 1; }
  const TaggedPoint& breakpoint(std::size_t i) const { return bps_.at(i).point; }
  const Breakpoint& breakpoint_info(std::size_t i) const { return bps_.at(i); }
  std::strong_ordering compare(const TaggedPoint& a, const TaggedPoint& b) const { return pcm::compare(a, b); }
  TaggedPoint extend(std::size_t piece, const TaggedPoint& x) const;
  Rational lambda() const { return lambda_; }
  bool within(const TaggedPoint& x, const TaggedPoint& d, const Rational& k) const;

  // dynamics
  std::optional<std::size_t> symbol(const TaggedPoint& p) const;
  TaggedPoint step(const TaggedPoint& p, std::size_t piece) const;

  // Eq. DEFG: DiscontinuityHit on a breakpoint of g
  TaggedPoint g_step(const TaggedPoint& p) const;
  std::optional<std::size_t> g_symbol(const TaggedPoint& p) const { return symbol(p); }

  // one-sided images g_j(d_j) at the ends of piece j
  TaggedPoint left_limit(std::size_t i) const;
  TaggedPoint right_limit(std::size_t i) const;

  const RealMap& base() const { return *base_; }
  const std::shared_ptr<const RealMap>& base_ptr() const { return base_; }
  const std::vector<std::shared_ptr<const CutOrbit>>& cuts() const { return cuts_; }
  std::size_t levels() const { return cuts_.size(); }
  // breakpoint index of the newest cut point (Eq. DJ0); 0 without cuts
  std::size_t j0() const { return j0_; }
  std::size_t base_piece(std::size_t piece) const { return base_piece_.at(piece - 1); }
  TaggedPoint cut_point(std::size_t level) const { return plain(cuts_.at(level - 1)->origin()); }
  // the map with the newest cut removed
  ExtendedMap parent() const;

 private:
  std::shared_ptr<const RealMap> base_;
  std::vector<std::shared_ptr<const CutOrbit>> cuts_;
  Rational lambda_;
  std::vector<Breakpoint> bps_;
  std::vector<std::size_t> base_piece_;
  std::size_t j0_ = 0;
};

// advance a cut orbit point by one step of the base map, branch decided by
// refining comparison against the base breakpoints
void advance(OrbitRef& r, const RealMap& base);
OrbitRef orbit_point(const std::shared_ptr<const CutOrbit>& cut, std::size_t t);

}  // namespace pcm

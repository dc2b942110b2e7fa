#include "pcm/tagged.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcm/errors.hpp"

namespace pcm {

namespace {

constexpr std::size_t start_depth = 64;

std::strong_ordering order_of(int c) {
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::size_t first_depth(const OrbitRef& r) { return std::min(start_depth, r.cut->xi0().cap()); }

std::strong_ordering versus(const Real& x, const OrbitRef& r) {
  std::strong_ordering quick = std::strong_ordering::equal;
  if (decided(x.estimate(), r.estimate(), &quick)) return quick;
  const std::size_t cap = r.cut->xi0().cap();
  for (std::size_t d = first_depth(r);; d = std::min(2 * d, cap)) {
    Interval<Real> e = r.enclose(d);
    if (x < e.lo) return std::strong_ordering::less;
    if (e.hi < x) return std::strong_ordering::greater;
    if (d >= cap)
      throw RefinementExhausted("cannot separate " + x.str() + " from xi^(" + std::to_string(r.cut->level()) + ")_" +
                                std::to_string(r.t));
  }
}

std::strong_ordering versus(const OrbitRef& a, const OrbitRef& b) {
  if (a.same_point(b)) return std::strong_ordering::equal;
  std::strong_ordering quick = std::strong_ordering::equal;
  if (decided(a.estimate(), b.estimate(), &quick)) return quick;
  const std::size_t cap_a = a.cut->xi0().cap(), cap_b = b.cut->xi0().cap();
  std::size_t da = first_depth(a), db = first_depth(b);
  for (;;) {
    Interval<Real> ea = a.enclose(da), eb = b.enclose(db);
    if (ea.hi < eb.lo) return std::strong_ordering::less;
    if (eb.hi < ea.lo) return std::strong_ordering::greater;
    if (da >= cap_a && db >= cap_b)
      throw RefinementExhausted("cannot separate xi^(" + std::to_string(a.cut->level()) + ")_" + std::to_string(a.t) +
                                " from xi^(" + std::to_string(b.cut->level()) + ")_" + std::to_string(b.t));
    da = std::min(2 * da, cap_a);
    db = std::min(2 * db, cap_b);
  }
}

std::strong_ordering flip(std::strong_ordering o) {
  return o == std::strong_ordering::less ? std::strong_ordering::greater
         : o == std::strong_ordering::greater ? std::strong_ordering::less
                                              : o;
}

}  // namespace

std::strong_ordering compare_positions(const Position& a, const Position& b) {
  if (const Real* x = std::get_if<Real>(&a)) {
    if (const Real* y = std::get_if<Real>(&b)) return *x <=> *y;
    return versus(*x, std::get<OrbitRef>(b));
  }
  const OrbitRef& r = std::get<OrbitRef>(a);
  if (const Real* y = std::get_if<Real>(&b)) return flip(versus(*y, r));
  return versus(r, std::get<OrbitRef>(b));
}

Interval<Real> enclose(const Position& p, std::size_t depth) {
  if (const Real* x = std::get_if<Real>(&p)) return {*x, *x};
  const OrbitRef& r = std::get<OrbitRef>(p);
  return r.enclose(std::min(depth, r.cut->xi0().cap()));
}

Estimate estimate(const Position& p) {
  if (const Real* x = std::get_if<Real>(&p)) return x->estimate();
  return std::get<OrbitRef>(p).estimate();
}

std::string to_string(const Position& p) {
  if (const Real* x = std::get_if<Real>(&p)) return x->str();
  const OrbitRef& r = std::get<OrbitRef>(p);
  return "xi" + std::to_string(r.cut->level()) + "_" + std::to_string(r.t);
}

std::strong_ordering compare(const TaggedPoint& a, const TaggedPoint& b) {
  auto c = compare_positions(a.pos, b.pos);
  if (c != std::strong_ordering::equal) return c;
  if (a.level == 0 && b.level == 0) return std::strong_ordering::equal;
  if (a.level == 0) return std::strong_ordering::less;
  if (b.level == 0) return std::strong_ordering::greater;
  if (a.level != b.level) throw std::logic_error("gap points of different levels share a position");
  return order_of(cmp(a.offset, b.offset));
}

bool identical(const TaggedPoint& a, const TaggedPoint& b) {
  if (a.level != b.level || a.offset != b.offset || a.pos.index() != b.pos.index()) return false;
  if (const Real* x = std::get_if<Real>(&a.pos)) return *x == std::get<Real>(b.pos);
  return std::get<OrbitRef>(a.pos).same_point(std::get<OrbitRef>(b.pos));
}

std::string to_string(const TaggedPoint& p) {
  if (!p.is_gap()) return "Base(" + to_string(p.pos) + ")";
  return "Gap(" + std::to_string(p.level) + "," + std::to_string(p.r()) + "," + to_string(p.offset) + ")";
}

void advance(OrbitRef& r, const RealMap& base) {
  std::size_t piece = 1;
  for (std::size_t i = 1; i < base.pieces(); ++i) {
    auto c = versus(base.breakpoint(i), r);
    if (c == std::strong_ordering::equal) throw DiscontinuityHit("cut orbit meets a base breakpoint");
    if (c == std::strong_ordering::less) piece = i + 1;
    else break;
  }
  r.advance(base.branch(piece));
}

OrbitRef orbit_point(const std::shared_ptr<const CutOrbit>& cut, std::size_t t) {
  OrbitRef r = cut->origin();
  while (r.t < t) advance(r, cut->base());
  return r;
}

TaggedPoint gap_point(const std::shared_ptr<const CutOrbit>& cut, std::size_t r, const Rational& offset) {
  return TaggedPoint{Position(orbit_point(cut, r)), cut->level(), offset};
}

ExtendedMap::ExtendedMap(std::shared_ptr<const RealMap> base, std::vector<std::shared_ptr<const CutOrbit>> cuts)
    : base_(std::move(base)), cuts_(std::move(cuts)) {
  auto slope = base_->uniform_slope();
  if (!slope) throw std::invalid_argument("extended maps need a base with one slope");
  lambda_ = *slope;
  std::vector<Breakpoint> inner;
  for (std::size_t i = 1; i < base_->pieces(); ++i)
    inner.push_back({plain(base_->breakpoint(i)), Kind::base_breakpoint, i});
  for (const auto& c : cuts_) inner.push_back({plain(c->origin()), Kind::cut, c->level()});
  std::sort(inner.begin(), inner.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.point < y.point; });
  bps_.push_back({plain(base_->lo()), Kind::domain_lo, 0});
  bps_.insert(bps_.end(), inner.begin(), inner.end());
  bps_.push_back({plain(base_->hi()), Kind::domain_hi, base_->pieces()});
  std::size_t bp = 1;
  for (std::size_t i = 1; i < bps_.size(); ++i) {
    base_piece_.push_back(bp);
    if (bps_[i].kind == Kind::base_breakpoint) ++bp;
    if (bps_[i].kind == Kind::cut && bps_[i].index == cuts_.size()) j0_ = i;
  }
}

ExtendedMap ExtendedMap::parent() const {
  if (cuts_.empty()) throw std::logic_error("base map has no parent");
  return ExtendedMap(base_, std::vector<std::shared_ptr<const CutOrbit>>(cuts_.begin(), cuts_.end() - 1));
}

TaggedPoint ExtendedMap::left_limit(std::size_t i) const {
  const Breakpoint& b = bps_.at(i);
  switch (b.kind) {
    case Kind::domain_lo: break;
    case Kind::domain_hi:
    case Kind::base_breakpoint: return plain(base_->branch(b.index)(base_->breakpoint(b.index)));
    case Kind::cut: {
      OrbitRef r = cuts_.at(b.index - 1)->origin();
      r.advance(base_->branch(base_piece(i)));
      return plain(std::move(r));
    }
  }
  throw std::logic_error("no left limit at the left end of the domain");
}

TaggedPoint ExtendedMap::right_limit(std::size_t i) const {
  const Breakpoint& b = bps_.at(i);
  switch (b.kind) {
    case Kind::domain_hi: break;
    case Kind::domain_lo:
    case Kind::base_breakpoint: return plain(base_->branch(b.index + 1)(base_->breakpoint(b.index)));
    case Kind::cut: {
      OrbitRef r = cuts_.at(b.index - 1)->origin();
      r.advance(base_->branch(base_piece(i + 1)));
      return TaggedPoint{Position(std::move(r)), b.index, lambda_};
    }
  }
  throw std::logic_error("no right limit at the right end of the domain");
}

TaggedPoint ExtendedMap::step(const TaggedPoint& p, std::size_t piece) const {
  const Branch<Real>& b = base_->branch(base_piece(piece));
  TaggedPoint out = p;
  if (Real* x = std::get_if<Real>(&out.pos)) *x = b(*x);
  else std::get<OrbitRef>(out.pos).advance(b);
  if (out.is_gap()) out.offset *= lambda_;
  return out;
}

TaggedPoint ExtendedMap::extend(std::size_t piece, const TaggedPoint& x) const {
  if (compare(x, bps_.at(piece - 1).point) == std::strong_ordering::equal) return right_limit(piece - 1);
  if (compare(x, bps_.at(piece).point) == std::strong_ordering::equal) return left_limit(piece);
  return step(x, piece);
}

std::optional<std::size_t> ExtendedMap::symbol(const TaggedPoint& p) const {
  const std::size_t N = pieces();
  std::size_t lo = 1, hi = N;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto c = compare(p, bps_[mid].point);
    if (c == std::strong_ordering::equal) return std::nullopt;
    if (c == std::strong_ordering::less) hi = mid;
    else lo = mid + 1;
  }
  if (lo < N && compare(p, bps_[lo].point) == std::strong_ordering::equal) return std::nullopt;
  return lo;
}

TaggedPoint ExtendedMap::g_step(const TaggedPoint& p) const {
  auto s = symbol(p);
  if (!s) throw DiscontinuityHit(to_string(p) + " is a discontinuity of g");
  return step(p, *s);
}

bool ExtendedMap::within(const TaggedPoint& x, const TaggedPoint& d, const Rational& k) const {
  Real r = (base_->hi() - base_->lo()) * k;
  Estimate ex = estimate(x.pos), ed = estimate(d.pos), er = r.estimate();
  double err = ed.error + er.error + (std::abs(ed.value) + std::abs(er.value)) * 0x1p-52;
  std::strong_ordering up = std::strong_ordering::equal, dn = std::strong_ordering::equal;
  bool u = decided(ex, Estimate{ed.value + er.value, err}, &up);
  bool v = decided(ex, Estimate{ed.value - er.value, err}, &dn);
  if ((u && up != std::strong_ordering::less) || (v && dn != std::strong_ordering::greater)) return false;
  if (u && v) return true;
  for (std::size_t depth = start_depth; depth <= 4096; depth *= 2) {
    Interval<Real> ix = enclose(x.pos, depth), id = enclose(d.pos, depth);
    Real lo = ix.lo - id.hi, hi = ix.hi - id.lo;
    if (-r < lo && hi < r) return true;
    if (!(lo < r) || !(-r < hi)) return false;
  }
  return false;  // undecided: no evidence claimed
}

}  // namespace pcm

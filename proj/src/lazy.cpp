#include "pcm/lazy.hpp"

#include <cmath>

#include "pcm/errors.hpp"

namespace pcm {

LazyPoint::LazyPoint(std::shared_ptr<const RealMap> base, Quadratic rho, Rational angle, std::size_t cap)
    : base_(std::move(base)), rho_(std::move(rho)), angle_(std::move(angle)), cap_(cap) {
  if (base_->pieces() != 2 || !base_->uniform_slope())
    throw std::invalid_argument("lazy points need a 2-piece base map with one slope");
  if (angle_ <= 0 || angle_ >= 1) throw std::invalid_argument("angle must lie in (0,1)");
  enc_ = {base_->lo(), base_->hi()};
  rho_d_ = rho_.approx();
  angle_d_ = angle_.get_d();
}

LazyPoint::LazyPoint(LazyPoint&& o) noexcept
    : base_(std::move(o.base_)), rho_(std::move(o.rho_)), angle_(std::move(o.angle_)), cap_(o.cap_) {
  std::lock_guard<std::mutex> lock(o.mutex_);
  depth_ = o.depth_;
  rho_d_ = o.rho_d_;
  angle_d_ = o.angle_d_;
  s_num_ = std::move(o.s_num_);
  p_pow_ = std::move(o.p_pow_);
  q_pow_ = std::move(o.q_pow_);
  enc_ = std::move(o.enc_);
  snapshots_ = std::move(o.snapshots_);
  estimate_ = o.estimate_;
}

Integer LazyPoint::floor_at(std::size_t k) const {
  double v = static_cast<double>(k) * rho_d_ + angle_d_;
  double f = std::floor(v);
  if (v - f > 1e-6 && f + 1 - v > 1e-6) return Integer(static_cast<long>(f));
  return rho_.floor_times(Integer(static_cast<unsigned long>(k)), angle_);
}

Symbol LazyPoint::address_symbol(std::size_t m) const {
  Integer e = floor_at(m) - floor_at(m - 1);
  return static_cast<Symbol>(1 + e.get_si());
}

Word LazyPoint::address(std::size_t n) const {
  Word w;
  for (std::size_t m = 1; m <= n; ++m) w.push_back(address_symbol(m));
  return w;
}

void LazyPoint::extend_locked(std::size_t depth) const {
  if (depth > cap_) throw RefinementExhausted("lazy point refinement cap " + std::to_string(cap_) + " reached");
  const Rational lambda = base_->branch(1).slope;
  const Integer p = lambda.get_num(), q = lambda.get_den();
  while (depth_ < depth) {
    ++depth_;
    if (depth_ > 1) s_num_ *= q;
    if (address_symbol(depth_) == 2) s_num_ += p_pow_;
    p_pow_ *= p;
    q_pow_ *= q;
  }
  const Real& b1 = base_->branch(1).intercept;
  const Real& b2 = base_->branch(2).intercept;
  Rational scale(p_pow_, q_pow_);
  scale.canonicalize();
  Rational S(s_num_ * q, q_pow_);
  S.canonicalize();
  Real shift = b1 * Rational((1 - scale) / (1 - lambda)) + (b2 - b1) * S;
  // the cylinder image holds the point; intersect with the previous snapshot
  Real lo = base_->lo() * scale + shift;
  Real hi = base_->hi() * scale + shift;
  if (enc_.lo < lo) enc_.lo = std::move(lo);
  if (hi < enc_.hi) enc_.hi = std::move(hi);
  if (!(enc_.lo < enc_.hi)) throw CheckFailed("lazy point tower emptied at depth " + std::to_string(depth_));
}

Interval<Real> LazyPoint::enclosure(std::size_t depth) const {
  if (depth > cap_) throw RefinementExhausted("lazy point refinement cap " + std::to_string(cap_) + " reached");
  std::size_t target = 64;
  while (target < depth) target *= 2;
  target = std::min(target, cap_);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = snapshots_.lower_bound(depth);
  if (it != snapshots_.end() && it->first <= target) return it->second;
  extend_locked(target);
  return snapshots_.emplace(target, enc_).first->second;
}

Estimate LazyPoint::estimate() const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (estimate_) return *estimate_;
  }
  Interval<Real> e = enclosure(64);
  Estimate lo = e.lo.estimate(), hi = e.hi.estimate();
  Estimate out{(lo.value + hi.value) / 2, (hi.value - lo.value) / 2 + lo.error + hi.error};
  std::lock_guard<std::mutex> lock(mutex_);
  estimate_ = out;
  return out;
}

std::size_t LazyPoint::depth() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return depth_;
}

Estimate OrbitRef::estimate() const {
  Estimate x = cut->xi0().estimate(), o = offset.estimate();
  double s = scale.get_d();
  double v = s * x.value + o.value;
  return {v, s * x.error + o.error + std::abs(v) * 0x1p-50};
}

Interval<Real> OrbitRef::enclose(std::size_t depth) const {
  Interval<Real> e = cut->xi0().enclosure(depth);
  return {e.lo * scale + offset, e.hi * scale + offset};
}

}  // namespace pcm

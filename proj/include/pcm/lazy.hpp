#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcm/numeric.hpp"
#include "pcm/pamap.hpp"
#include "pcm/symbolic.hpp"

namespace pcm {

// A point of the attractor of a Sturmian base map, given by the rotation
// angle theta of its backward address:
//   a_m = 1 + floor(theta + m rho) - floor(theta + (m-1) rho),
//   point = lim f_{a_1} o ... o f_{a_n} (X).
// The tower E_n = E_{n-1} ∩ f_{a_1} o ... o f_{a_n}([c_0, c_N]) is refined on
// demand and shared by every copy.  Refinement is serialized by a mutex.
class LazyPoint {
 public:
  LazyPoint(std::shared_ptr<const RealMap> base, Quadratic rho, Rational angle, std::size_t cap);
  LazyPoint(LazyPoint&& o) noexcept;

  Symbol address_symbol(std::size_t m) const;
  Word address(std::size_t n) const;
  // Enclosure at the first cached depth >= depth.  Depths are kept at
  // 64 * 2^k (and the cap), so shallow queries stay cheap after deep ones.
  // RefinementExhausted beyond the cap.
  Interval<Real> enclosure(std::size_t depth) const;
  // from the depth-64 enclosure, cached
  Estimate estimate() const;
  // deepest tower level computed so far
  std::size_t depth() const;
  std::size_t cap() const { return cap_; }
  const Rational& angle() const { return angle_; }
  const Quadratic& rho() const { return rho_; }

 private:
  void extend_locked(std::size_t depth) const;
  // floor(k rho + angle), double shortcut away from integers
  Integer floor_at(std::size_t k) const;

  std::shared_ptr<const RealMap> base_;
  Quadratic rho_;
  Rational angle_;
  std::size_t cap_;

  mutable std::mutex mutex_;
  mutable std::size_t depth_ = 0;
  double rho_d_ = 0, angle_d_ = 0;
  // f_{a_1} o ... o f_{a_n}(x) = lambda^n x + b_1 (1 - lambda^n)/(1 - lambda) + (b_2 - b_1) S_n,
  // S_n = sum_{m<=n, a_m=2} lambda^{m-1} = s_num_ / q^{n-1}, lambda = p/q
  mutable Integer s_num_ = 0;
  mutable Integer p_pow_ = 1;  // p^n
  mutable Integer q_pow_ = 1;  // q^n
  mutable Interval<Real> enc_;
  mutable std::map<std::size_t, Interval<Real>> snapshots_;
  mutable std::optional<Estimate> estimate_;
};

class CutOrbit;

// xi_t = f0^t(xi_0) = scale * xi_0 + offset along the branches taken so far
struct OrbitRef {
  std::shared_ptr<const CutOrbit> cut;
  std::size_t t = 0;
  Rational scale = 1;
  Real offset;

  Interval<Real> enclose(std::size_t depth) const;
  Estimate estimate() const;
  void advance(const Branch<Real>& b) {
    scale *= b.slope;
    offset = offset * b.slope + b.intercept;
    ++t;
  }
  bool same_point(const OrbitRef& o) const { return cut == o.cut && t == o.t; }
};

struct CutRecord {
  std::size_t level = 0;
  std::uint64_t seed = 0;
  std::size_t candidate = 0;
  std::size_t exclusion_horizon = 0;
  std::size_t clean_atom = 0;  // index of the generation-1 parent atom holding xi_0
  std::vector<std::pair<std::string, std::size_t>> checks;  // name, comparisons passed
};

class CutOrbit : public std::enable_shared_from_this<CutOrbit> {
 public:
  CutOrbit(std::shared_ptr<const RealMap> base, LazyPoint xi0, CutRecord record)
      : base_(std::move(base)), xi0_(std::move(xi0)), record_(std::move(record)) {}

  const LazyPoint& xi0() const { return xi0_; }
  const RealMap& base() const { return *base_; }
  std::size_t level() const { return record_.level; }
  const CutRecord& record() const { return record_; }
  CutRecord& record() { return record_; }
  const Rational& lambda() const { return base_->branch(1).slope; }

  OrbitRef origin() const { return OrbitRef{shared_from_this(), 0, 1, Real(0)}; }

 private:
  std::shared_ptr<const RealMap> base_;
  LazyPoint xi0_;
  CutRecord record_;
};

}  // namespace pcm

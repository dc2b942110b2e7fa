#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcm {

// Exact rational, always canonical (GMP keeps mpq_class in lowest terms
// after every arithmetic operation).
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p" and "-p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
// 12 significant digits by default, display only.
std::string to_decimal(const Rational& q, int digits = 12);
Rational power(const Rational& base, unsigned long e);
Integer floor_of(const Rational& q);

// (p + q*sqrt(d)) / r with d > 1 not a perfect square and r > 0.
struct Quadratic {
  Integer p, q, d, r;

  static Quadratic golden_conjugate();  // (sqrt(5) - 1) / 2
  // floor(k * value + shift) for rational shift, exact.
  Integer floor_times(const Integer& k, const Rational& shift = 0) const;
  std::string str() const;
  double approx() const;
  bool operator==(const Quadratic&) const = default;
};

// floating value with a rigorous absolute error bound
struct Estimate {
  double value = 0;
  double error = 0;
};

// true when the estimates alone decide the order; sets *c
bool decided(const Estimate& x, const Estimate& y, std::strong_ordering* c);

// A positive irrational constant, reachable only through nested rational
// enclosures.  enclosure(m) must be nested in m and shrink to the value.
class Irrational {
 public:
  virtual ~Irrational() = default;
  virtual std::pair<Rational, Rational> enclosure(std::size_t terms) const = 0;
  virtual std::size_t term_cap() const = 0;
  virtual std::string symbol() const = 0;
  virtual Estimate estimate() const = 0;
  // same constant, possibly another object (e.g. after reloading a map)
  virtual bool same_value(const Irrational& o) const { return this == &o; }
};

// mu(lambda, rho) = (1-lambda) (1 + sum_{n>=0} lambda^{n+1} (floor((n+2)rho) - floor((n+1)rho)))
// The intercept of the base family for which the endpoint orbit codes the
// rotation by rho.  Tail after m terms lies in [0, lambda^{m+1}].
class SturmianIntercept final : public Irrational {
 public:
  SturmianIntercept(Rational lambda, Quadratic rho, std::size_t term_cap);

  std::pair<Rational, Rational> enclosure(std::size_t terms) const override;
  std::size_t term_cap() const override { return cap_; }
  std::string symbol() const override { return "mu"; }
  Estimate estimate() const override { return estimate_; }
  bool same_value(const Irrational& o) const override;

  const Rational& lambda() const { return lambda_; }
  const Quadratic& rho() const { return rho_; }
  // digit floor((n+2)rho) - floor((n+1)rho)
  int digit(std::size_t n) const;

 private:
  Rational lambda_;
  Quadratic rho_;
  std::size_t cap_;
  Estimate estimate_;

  mutable std::mutex mutex_;
  // lambda = p/q; sum_{n<terms} lambda^{n+1} digit(n) = num_ / q^terms
  mutable std::size_t terms_ = 0;
  mutable Integer num_ = 0;
  mutable Integer p_pow_;  // p^{terms+1}
  mutable Integer q_pow_;  // q^terms
  mutable std::map<std::size_t, std::pair<Rational, Rational>> cache_;
};

// a + b*tau, tau a fixed irrational (or absent when b == 0).
// Every orbit point of a Sturmian base map has this form, so order
// comparisons stay exact: tau is irrational, hence a + b*tau == 0 iff a == b == 0.
class Real {
 public:
  Real() = default;
  Real(const Rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  Real(long a) : a_(a) {}             // NOLINT(google-explicit-constructor)
  Real(Rational a, Rational b, std::shared_ptr<const Irrational> tau);

  const Rational& rational_part() const { return a_; }
  const Rational& tau_part() const { return b_; }
  const std::shared_ptr<const Irrational>& tau() const { return tau_; }
  bool is_rational() const { return b_ == 0; }

  // -1, 0, 1; refines tau up to its cap, then RefinementExhausted
  int sign() const;
  std::pair<Rational, Rational> enclose(std::size_t terms) const;
  Estimate estimate() const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Rational& k);
  Real& operator/=(const Rational& k);

  friend Real operator+(Real x, const Real& y) { return x += y; }
  friend Real operator-(Real x, const Real& y) { return x -= y; }
  friend Real operator*(Real x, const Rational& k) { return x *= k; }
  friend Real operator*(const Rational& k, Real x) { return x *= k; }
  friend Real operator/(Real x, const Rational& k) { return x /= k; }
  friend Real operator-(Real x) {
    x.a_ = -x.a_;
    x.b_ = -x.b_;
    return x;
  }

  friend bool operator==(const Real& x, const Real& y);
  friend std::strong_ordering operator<=>(const Real& x, const Real& y);

  std::string str() const;
  std::string decimal(int digits = 12) const;
  double approx() const;

 private:
  void adopt(const std::shared_ptr<const Irrational>& t);
  int sign_at(const Rational& t) const;

  Rational a_;
  Rational b_;
  std::shared_ptr<const Irrational> tau_;
};

std::string to_string(const Real& x);
inline Real abs(const Real& x) { return x.sign() < 0 ? -x : x; }

inline std::strong_ordering order(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}
inline std::strong_ordering order(const Real& a, const Real& b) { return a <=> b; }

template <class P>
struct Interval {
  P lo, hi;
  bool operator==(const Interval&) const = default;
};

}  // namespace pcm

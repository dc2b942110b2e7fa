#include "pcm/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pcm/errors.hpp"

namespace pcm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  Integer n(std::string(num), 10);
  Integer d = slash == std::string_view::npos ? Integer(1) : Integer(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  if (!text.empty() && text.front() == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  if (q == 0) return "0";
  mpf_class f(q, 256);
  char buf[128];
  gmp_snprintf(buf, sizeof buf, "%.*Fg", digits, f.get_mpf_t());
  return buf;
}

Rational power(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

Integer floor_of(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Quadratic Quadratic::golden_conjugate() { return Quadratic{-1, 1, 5, 2}; }

Integer Quadratic::floor_times(const Integer& k, const Rational& shift) const {
  const Integer& u = shift.get_num();
  const Integer& v = shift.get_den();
  Integer a = v * k * p + u * r;
  Integer b = v * k * q;
  Integer den = v * r;
  Integer t = 0;
  if (b != 0) {
    Integer sq = b * b * d;
    mpz_sqrt(t.get_mpz_t(), sq.get_mpz_t());
    if (b < 0) t = -t - 1;  // floor of a negative irrational
  }
  Integer out;
  Integer numer = a + t;
  mpz_fdiv_q(out.get_mpz_t(), numer.get_mpz_t(), den.get_mpz_t());
  return out;
}

std::string Quadratic::str() const {
  return "(" + p.get_str() + "+" + q.get_str() + "*sqrt(" + d.get_str() + "))/" + r.get_str();
}

double Quadratic::approx() const {
  return (p.get_d() + q.get_d() * std::sqrt(d.get_d())) / r.get_d();
}

SturmianIntercept::SturmianIntercept(Rational lambda, Quadratic rho, std::size_t term_cap)
    : lambda_(std::move(lambda)), rho_(std::move(rho)), cap_(term_cap) {
  if (lambda_ <= 0 || lambda_ >= 1) throw ParameterOutOfRange("lambda must lie in (0,1)");
  if (rho_.r <= 0 || rho_.d <= 1 || mpz_perfect_square_p(rho_.d.get_mpz_t()) || rho_.q == 0)
    throw ParameterOutOfRange("rotation number must be a quadratic irrational");
  if (rho_.floor_times(1) != 0) throw ParameterOutOfRange("rotation number must lie in (0,1)");
  p_pow_ = lambda_.get_num();
  q_pow_ = 1;
  auto bits = static_cast<std::size_t>(std::ceil(60 / -std::log2(lambda_.get_d())));
  auto [lo, hi] = enclosure(std::min(bits, cap_));
  estimate_.value = Rational((lo + hi) / 2).get_d();
  estimate_.error = Rational(hi - lo).get_d() + std::abs(estimate_.value) * 0x1p-52;
}

int SturmianIntercept::digit(std::size_t n) const {
  Integer k2(static_cast<unsigned long>(n + 2));
  Integer k1(static_cast<unsigned long>(n + 1));
  return static_cast<int>(Integer(rho_.floor_times(k2) - rho_.floor_times(k1)).get_si());
}

std::pair<Rational, Rational> SturmianIntercept::enclosure(std::size_t terms) const {
  if (terms > cap_) throw RefinementExhausted("intercept refinement cap reached");
  std::lock_guard<std::mutex> lock(mutex_);
  if (auto it = cache_.find(terms); it != cache_.end()) return it->second;
  const Integer p = lambda_.get_num(), q = lambda_.get_den();
  if (terms < terms_) {
    terms_ = 0;
    num_ = 0;
    p_pow_ = p;
    q_pow_ = 1;
  }
  while (terms_ < terms) {
    num_ *= q;
    if (digit(terms_) != 0) num_ += p_pow_;
    p_pow_ *= p;
    q_pow_ *= q;
    ++terms_;
  }
  // lo = (1-lambda)(1 + num/q^m) = (q-p)(q^m + num) / q^{m+1},  hi = lo + p^{m+1}/q^{m+1}
  // rounded outward to 2^-shift so endpoints stay short
  double bits = (static_cast<double>(terms) + 1) * -std::log2(lambda_.get_d()) + 4;
  auto shift = static_cast<unsigned long>(bits);
  Integer den = q_pow_ * q;
  Integer lo_num = (q - p) * (q_pow_ + num_);
  Integer hi_num = lo_num + p_pow_;
  lo_num <<= shift;
  hi_num <<= shift;
  Integer lo_n, hi_n;
  mpz_fdiv_q(lo_n.get_mpz_t(), lo_num.get_mpz_t(), den.get_mpz_t());
  mpz_cdiv_q(hi_n.get_mpz_t(), hi_num.get_mpz_t(), den.get_mpz_t());
  Rational scale;
  mpz_ui_pow_ui(scale.get_num_mpz_t(), 2, shift);
  std::pair<Rational, Rational> iv{Rational(lo_n) / scale, Rational(hi_n) / scale};
  if (cache_.size() > 256) cache_.clear();
  return cache_.emplace(terms, iv).first->second;
}

Real::Real(Rational a, Rational b, std::shared_ptr<const Irrational> tau)
    : a_(std::move(a)), b_(std::move(b)), tau_(std::move(tau)) {
  if (b_ != 0 && !tau_) throw std::logic_error("irrational part without a constant");
}

bool SturmianIntercept::same_value(const Irrational& o) const {
  auto* s = dynamic_cast<const SturmianIntercept*>(&o);
  return s && s->lambda_ == lambda_ && s->rho_ == rho_;
}

void Real::adopt(const std::shared_ptr<const Irrational>& t) {
  if (!t) return;
  if (!tau_) {
    tau_ = t;
  } else if (tau_ != t && !tau_->same_value(*t)) {
    throw std::logic_error("values over different irrational constants");
  }
}

Real& Real::operator+=(const Real& o) {
  adopt(o.tau_);
  a_ += o.a_;
  if (o.b_ != 0) b_ += o.b_;
  return *this;
}

Real& Real::operator-=(const Real& o) {
  adopt(o.tau_);
  a_ -= o.a_;
  if (o.b_ != 0) b_ -= o.b_;
  return *this;
}

Real& Real::operator*=(const Rational& k) {
  a_ *= k;
  if (b_ != 0) b_ *= k;
  return *this;
}

Real& Real::operator/=(const Rational& k) {
  a_ /= k;
  if (b_ != 0) b_ /= k;
  return *this;
}

// sign of a + b*t without canonicalizing: with g = gcd(a_d, b_d),
// sign(a_n (b_d/g) t_d + b_n (a_d/g) t_n)
int Real::sign_at(const Rational& t) const {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a_.get_den_mpz_t(), b_.get_den_mpz_t());
  Integer u = a_.get_num() * t.get_den();
  Integer v = b_.get_num() * t.get_num();
  if (g != b_.get_den()) u *= Integer(b_.get_den() / g);
  if (g != a_.get_den()) v *= Integer(a_.get_den() / g);
  u += v;
  return sgn(u);
}

int Real::sign() const {
  if (b_ == 0) return sgn(a_);
  const std::size_t cap = tau_->term_cap();
  for (std::size_t m = 64;; m *= 2) {
    if (m > cap) m = cap;
    auto [lo, hi] = tau_->enclosure(m);
    int s1 = sign_at(lo), s2 = sign_at(hi);
    if (s1 == s2 && s1 != 0) return s1;
    if (m == cap) throw RefinementExhausted("sign of " + str() + " undecided at the refinement cap");
  }
}

std::pair<Rational, Rational> Real::enclose(std::size_t terms) const {
  if (b_ == 0) return {a_, a_};
  auto [lo, hi] = tau_->enclosure(std::min(terms, tau_->term_cap()));
  Rational v1 = a_ + b_ * lo;
  Rational v2 = a_ + b_ * hi;
  if (v1 > v2) std::swap(v1, v2);
  return {v1, v2};
}

bool decided(const Estimate& x, const Estimate& y, std::strong_ordering* c) {
  double d = x.value - y.value;
  double slack = x.error + y.error + (std::abs(x.value) + std::abs(y.value)) * 0x1p-50 + 0x1p-1000;
  if (d > slack) {
    *c = std::strong_ordering::greater;
    return true;
  }
  if (-d > slack) {
    *c = std::strong_ordering::less;
    return true;
  }
  return false;
}

Estimate Real::estimate() const {
  // mpq_get_d truncates, relative error below 2^-52
  double a = a_.get_d();
  if (b_ == 0) return {a, std::abs(a) * 0x1p-51};
  double b = b_.get_d();
  Estimate t = tau_->estimate();
  double v = a + b * t.value;
  return {v, (std::abs(a) + 2 * std::abs(b * t.value)) * 0x1p-50 + std::abs(b) * t.error};
}

bool operator==(const Real& x, const Real& y) {
  if (x.b_ != 0 && y.b_ != 0 && x.tau_ != y.tau_ && !x.tau_->same_value(*y.tau_))
    throw std::logic_error("values over different irrational constants");
  return x.a_ == y.a_ && x.b_ == y.b_;
}

std::strong_ordering operator<=>(const Real& x, const Real& y) {
  if (x.b_ == y.b_) {
    int c = cmp(x.a_, y.a_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater
                                                      : std::strong_ordering::equal;
  }
  std::strong_ordering c = std::strong_ordering::equal;
  if (decided(x.estimate(), y.estimate(), &c)) return c;
  int s = (x - y).sign();
  return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string Real::str() const {
  if (b_ == 0) return to_string(a_);
  std::string out;
  if (a_ != 0) out = to_string(a_) + (b_ > 0 ? "+" : "");
  if (b_ == 1) return out + tau_->symbol();
  if (b_ == -1) return out + "-" + tau_->symbol();
  return out + to_string(b_) + "*" + tau_->symbol();
}

std::string Real::decimal(int digits) const {
  if (b_ == 0) return to_decimal(a_, digits);
  auto [lo, hi] = enclose(256);
  return to_decimal((lo + hi) / 2, digits);
}

double Real::approx() const {
  if (b_ == 0) return a_.get_d();
  auto [lo, hi] = enclose(128);
  return Rational((lo + hi) / 2).get_d();
}

std::string to_string(const Real& x) { return x.str(); }

}  // namespace pcm

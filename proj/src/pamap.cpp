#include "pcm/pamap.hpp"

#include <memory>

namespace pcm {

std::string to_string(BoundaryPolicy p) {
  switch (p) {
    case BoundaryPolicy::left_limit: return "left-limit";
    case BoundaryPolicy::right_limit: return "right-limit";
    case BoundaryPolicy::undefined: return "undefined";
  }
  return "undefined";
}

BoundaryPolicy parse_policy(const std::string& s) {
  if (s == "left-limit") return BoundaryPolicy::left_limit;
  if (s == "right-limit") return BoundaryPolicy::right_limit;
  if (s == "undefined") return BoundaryPolicy::undefined;
  throw std::invalid_argument("unknown boundary policy '" + s + "'");
}

RealMap to_real(const PAMap& m) {
  std::vector<Real> c(m.breakpoints().begin(), m.breakpoints().end());
  std::vector<Branch<Real>> b;
  for (const auto& br : m.branches()) b.push_back({br.slope, Real(br.intercept)});
  return RealMap(std::move(c), std::move(b), m.policies());
}

PAMap build_base_map(const Rational& lambda, const Rational& mu) {
  if (lambda <= 0 || lambda >= 1) throw ParameterOutOfRange("lambda must lie in (0,1)");
  if (mu <= 0 || mu >= 1) throw ParameterOutOfRange("mu must lie in (0,1)");
  if (lambda + mu <= 1) throw ParameterOutOfRange("lambda + mu must exceed 1");
  Rational c = (1 - mu) / lambda;
  return PAMap({Rational(0), c, Rational(1)},
               {{lambda, mu}, {lambda, Rational(mu - 1)}},
               {BoundaryPolicy::right_limit});
}

RealMap build_sturmian_map(const Rational& lambda, const Quadratic& rho, std::size_t term_cap) {
  auto tau = std::make_shared<const SturmianIntercept>(lambda, rho, term_cap);
  Real mu(0, 1, tau);
  if (!(mu < Real(1)) || !(Real(0) < mu)) throw ParameterOutOfRange("mu must lie in (0,1)");
  if (!(Real(1) < mu + Real(lambda))) throw ParameterOutOfRange("lambda + mu must exceed 1");
  Real c = (Real(1) - mu) / lambda;
  return RealMap({Real(0), c, Real(1)},
                 {{lambda, mu}, {lambda, mu - Real(1)}},
                 {BoundaryPolicy::right_limit});
}

}  // namespace pcm

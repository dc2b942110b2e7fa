#include "pcm/atoms.hpp"

namespace pcm {

VerifyResult<Rational> verify_no_periodic(const Rational& lambda, const Rational& mu, std::size_t K) {
  return verify_no_periodic(build_base_map(lambda, mu), K);
}

}  // namespace pcm

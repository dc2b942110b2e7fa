#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcm/atoms.hpp"
#include "pcm/checks.hpp"
#include "pcm/tagged.hpp"

namespace pcm {

// n,p_hat,alpha_fit_residual,T; residual p_hat(n) - (alpha n + beta), empty without a fit
std::string complexity_csv(const SeedRun& r);

// One interval of an atom or attractor listing.  `left`/`right` are exact
// ("p/q", "a+b*mu" or a tagged point), the decimals are display only.
struct IntervalRow {
  std::size_t generation = 0;
  std::string word;
  std::string left, right;
  std::string left_decimal, right_decimal;
  double left_value = 0, right_value = 0;  // for drawing
};

IntervalRow row(std::size_t generation, const Word& word, const Interval<Real>& iv);
// tagged endpoints placed by their embedded position (phi sums truncated at R)
IntervalRow row(const ExtendedMap& em, std::size_t generation, const Word& word, const Interval<TaggedPoint>& iv,
                std::size_t R = 60);

std::string atoms_csv(const std::vector<IntervalRow>& rows);
std::string attractor_csv(const std::vector<IntervalRow>& rows);
// stacked bars, one row per generation, x scaled from [lo, hi]
std::string attractor_svg(const std::vector<IntervalRow>& rows, double lo, double hi);

std::string suite_text(const SuiteResult& s);

}  // namespace pcm

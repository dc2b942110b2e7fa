#include "pcm/symbolic.hpp"

#include <algorithm>

namespace pcm {

std::string to_string(const Word& w) {
  bool narrow = std::all_of(w.begin(), w.end(), [](Symbol s) { return s < 10; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!narrow && i) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

std::vector<std::uint64_t> factor_counts(std::span<const Symbol> s, std::size_t n_max) {
  std::vector<std::uint64_t> counts(n_max, 0);
  if (s.empty() || n_max == 0) return counts;
  std::size_t k = *std::max_element(s.begin(), s.end()) + 1;

  // suffix automaton; each state v != 0 represents the lengths (len(link v), len v]
  std::vector<std::int32_t> len{0}, link{-1};
  std::vector<std::int32_t> next(k, -1);
  len.reserve(2 * s.size());
  link.reserve(2 * s.size());
  next.reserve(2 * s.size() * k);
  std::int32_t last = 0;
  auto add_state = [&](std::int32_t l, std::int32_t lk) {
    len.push_back(l);
    link.push_back(lk);
    next.resize(next.size() + k, -1);
    return static_cast<std::int32_t>(len.size() - 1);
  };
  for (Symbol ch : s) {
    std::int32_t cur = add_state(len[last] + 1, 0);
    std::int32_t p = last;
    while (p != -1 && next[p * k + ch] == -1) {
      next[p * k + ch] = cur;
      p = link[p];
    }
    if (p != -1) {
      std::int32_t q = next[p * k + ch];
      if (len[p] + 1 == len[q]) {
        link[cur] = q;
      } else {
        std::int32_t clone = add_state(len[p] + 1, link[q]);
        std::copy_n(next.begin() + q * k, k, next.begin() + clone * k);
        while (p != -1 && next[p * k + ch] == q) {
          next[p * k + ch] = clone;
          p = link[p];
        }
        link[q] = link[cur] = clone;
      }
    }
    last = cur;
  }

  std::vector<std::int64_t> diff(n_max + 2, 0);
  for (std::size_t v = 1; v < len.size(); ++v) {
    std::size_t a = static_cast<std::size_t>(len[link[v]]) + 1;
    std::size_t b = static_cast<std::size_t>(len[v]);
    if (a > n_max) continue;
    diff[a] += 1;
    diff[std::min(b, n_max) + 1] -= 1;
  }
  std::int64_t run = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    run += diff[n];
    counts[n - 1] = static_cast<std::uint64_t>(run);
  }
  return counts;
}

ComplexityTable complexity(std::span<const Symbol> s, std::size_t n_max) {
  if (n_max > s.size())
    throw PrefixTooShort("n_max " + std::to_string(n_max) + " exceeds prefix length " + std::to_string(s.size()));
  ComplexityTable t;
  t.T = s.size();
  t.counts = factor_counts(s, n_max);
  t.half = factor_counts(s.first(s.size() / 2), n_max);
  while (t.stabilized_up_to < n_max && t.counts[t.stabilized_up_to] == t.half[t.stabilized_up_to])
    ++t.stabilized_up_to;
  return t;
}

std::optional<AffineFit> fit_affine(const ComplexityTable& t) {
  const std::size_t S = t.stabilized_up_to;
  if (S < 3) return std::nullopt;
  auto p = [&](std::size_t n) { return static_cast<std::int64_t>(t.p(n)); };
  const std::int64_t alpha = p(S) - p(S - 1);
  std::size_t m0 = S - 1;
  while (m0 > 1 && p(m0) - p(m0 - 1) == alpha) --m0;
  if (S - m0 < 2) return std::nullopt;
  return AffineFit{alpha, p(m0) - alpha * static_cast<std::int64_t>(m0), m0, S};
}

std::set<Word> word_set(std::span<const Symbol> s, std::size_t n) {
  if (n > s.size()) throw PrefixTooShort("word length exceeds prefix length");
  std::set<Word> out;
  for (std::size_t t = 0; t + n <= s.size(); ++t) out.emplace(s.begin() + t, s.begin() + t + n);
  return out;
}

}  // namespace pcm

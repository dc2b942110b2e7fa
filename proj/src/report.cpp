#include "pcm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "pcm/construct.hpp"

namespace pcm {

namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string complexity_csv(const SeedRun& r) {
  std::ostringstream o;
  o << "n,p_hat,alpha_fit_residual,T\n";
  const std::size_t T = r.itinerary.size();
  for (std::size_t n = 1; n <= r.table.n_max(); ++n) {
    o << n << ',' << r.table.p(n) << ',';
    if (r.fit)
      o << static_cast<std::int64_t>(r.table.p(n)) - (r.fit->alpha * static_cast<std::int64_t>(n) + r.fit->beta);
    o << ',' << T << '\n';
  }
  return o.str();
}

IntervalRow row(std::size_t generation, const Word& word, const Interval<Real>& iv) {
  return IntervalRow{generation, to_string(word), iv.lo.str(), iv.hi.str(), iv.lo.decimal(), iv.hi.decimal(),
                     iv.lo.approx(), iv.hi.approx()};
}

IntervalRow row(const ExtendedMap& em, std::size_t generation, const Word& word, const Interval<TaggedPoint>& iv,
                std::size_t R) {
  Interval<Real> a = embed_enclosure(em, iv.lo, R), b = embed_enclosure(em, iv.hi, R);
  return IntervalRow{generation, to_string(word), to_string(iv.lo), to_string(iv.hi), a.lo.decimal(), b.lo.decimal(),
                     a.lo.approx(), b.lo.approx()};
}

std::string atoms_csv(const std::vector<IntervalRow>& rows) {
  std::ostringstream o;
  o << "generation,word,left,right,left_decimal,right_decimal\n";
  for (const auto& r : rows)
    o << r.generation << ',' << field(r.word) << ',' << field(r.left) << ',' << field(r.right) << ','
      << r.left_decimal << ',' << r.right_decimal << '\n';
  return o.str();
}

std::string attractor_csv(const std::vector<IntervalRow>& rows) {
  std::ostringstream o;
  o << "generation,left,right,left_decimal,right_decimal\n";
  for (const auto& r : rows)
    o << r.generation << ',' << field(r.left) << ',' << field(r.right) << ',' << r.left_decimal << ','
      << r.right_decimal << '\n';
  return o.str();
}

std::string attractor_svg(const std::vector<IntervalRow>& rows, double lo, double hi) {
  std::map<std::size_t, std::vector<const IntervalRow*>> by_gen;
  for (const auto& r : rows) by_gen[r.generation].push_back(&r);
  const double width = 800, left = 60, bar = 14, gap = 8;
  const double height = 20 + static_cast<double>(by_gen.size()) * (bar + gap);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width + left + 20, 0) << "\" height=\""
    << fixed(height, 0) << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double y = 10;
  for (const auto& [g, list] : by_gen) {
    o << "<text x=\"4\" y=\"" << fixed(y + bar - 3, 1) << "\" font-family=\"monospace\" font-size=\"11\">n="
      << g << "</text>\n";
    o << "<line x1=\"" << fixed(left, 1) << "\" x2=\"" << fixed(left + width, 1) << "\" y1=\"" << fixed(y + bar / 2, 1)
      << "\" y2=\"" << fixed(y + bar / 2, 1) << "\" stroke=\"#ccc\"/>\n";
    for (const IntervalRow* r : list) {
      double x0 = left + (r->left_value - lo) / (hi - lo) * width;
      double x1 = left + (r->right_value - lo) / (hi - lo) * width;
      double w = std::max(x1 - x0, 0.5);
      o << "<rect x=\"" << fixed(x0, 3) << "\" y=\"" << fixed(y, 1) << "\" width=\"" << fixed(w, 3) << "\" height=\""
        << fixed(bar, 1) << "\" fill=\"#333\"/>\n";
    }
    y += bar + gap;
  }
  o << "</svg>\n";
  return o.str();
}

std::string suite_text(const SuiteResult& s) {
  std::ostringstream o;
  for (const auto& l : s.lines)
    o << s.suite << ' ' << l.name << ' ' << (l.skipped ? "SKIP" : l.pass ? "PASS" : "FAIL") << "  " << l.detail
      << '\n';
  return o.str();
}

}  // namespace pcm

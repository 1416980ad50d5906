#pragma once

// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "refparse/annotate.hpp"
#include "refparse/crf_kernels.hpp"
#include "refparse/model.hpp"
#include "refparse/text.hpp"
#include "refparse/tokenize.hpp"

namespace fixtures {

using refparse::Label;

inline const std::string kFig1 =
    "Dominika Tkaczyk, Pawel Szostek, Mateusz Fedoryszak, Piotr Jan Dendek and Lukasz Bolikowski. "
    "CERMINE: automatic extraction of structured metadata from scientific literature. In International "
    "Journal on Document Analysis and Recognition, 2015, vol. 18, no. 4, pp. 317-335, doi: "
    "10.1007/s10032-015-0249-8.";

inline const std::string kFig4 = R"(<citation>
<author><fn>Dominika</fn> <sn>Tkaczyk</sn></author>,
<author><fn>Pawel</fn> <sn>Szostek</sn></author>,
<author><fn>Mateusz</fn> <sn>Fedoryszak</sn></author>,
<author><fn>Piotr Jan</fn> <sn>Dendek</sn></author> and
<author><fn>Lukasz</fn> <sn>Bolikowski</sn></author>.
<title> CERMINE: automatic extraction of structured metadata
from scientific literature</title>.
In <journal>International Journal on Document Analysis and
Recognition</journal>,
<year>2015</year>,
vol. <volume>18</volume>,
no. <issue>4</issue>,
pp. <fpage>317</fpage>-<lpage>335</lpage>,
doi: <doi>10.1007/s10032-015-0249-8</doi>.
</citation>)";

/// The labeled tokens of the example reference.
inline std::vector<std::pair<std::string, Label>> fig3() {
  using L = Label;
  return {
      {"Dominika", L::AuFn}, {"Tkaczyk", L::AuSn}, {",", L::Oth},          {"Pawel", L::AuFn},
      {"Szostek", L::AuSn},  {",", L::Oth},        {"Mateusz", L::AuFn},   {"Fedoryszak", L::AuSn},
      {",", L::Oth},         {"Piotr", L::AuFn},   {"Jan", L::AuFn},       {"Dendek", L::AuSn},
      {"and", L::Oth},       {"Lukasz", L::AuFn},  {"Bolikowski", L::AuSn}, {".", L::Oth},
      {"CERMINE", L::Title}, {":", L::Title},      {"automatic", L::Title}, {"extraction", L::Title},
      {"of", L::Title},      {"structured", L::Title}, {"metadata", L::Title}, {"from", L::Title},
      {"scientific", L::Title}, {"literature", L::Title}, {".", L::Oth},   {"In", L::Oth},
      {"International", L::Src}, {"Journal", L::Src}, {"on", L::Src},     {"Document", L::Src},
      {"Analysis", L::Src},  {"and", L::Src},      {"Recognition", L::Src}, {",", L::Oth},
      {"2015", L::Year},     {",", L::Oth},        {"vol", L::Oth},        {".", L::Oth},
      {"18", L::Vol},        {",", L::Oth},        {"no", L::Oth},         {".", L::Oth},
      {"4", L::Issue},       {",", L::Oth},        {"pp", L::Oth},         {".", L::Oth},
      {"317", L::Fpage},     {"-", L::Oth},        {"335", L::Lpage},      {",", L::Oth},
      {"doi", L::Oth},       {":", L::Oth},        {"10", L::Doi},         {".", L::Doi},
      {"1007", L::Doi},      {"/", L::Doi},        {"s", L::Doi},          {"10032", L::Doi},
      {"-", L::Doi},         {"015", L::Doi},      {"-", L::Doi},          {"0249", L::Doi},
      {"-", L::Doi},         {"8", L::Doi},        {".", L::Oth},
  };
}

inline refparse::LabeledSequence fig3_sequence() {
  std::vector<Label> labels;
  for (const auto& [text, label] : fig3()) labels.push_back(label);
  return refparse::LabeledSequence(refparse::tokenize(kFig1), labels);
}

/// Ground truth with the full field set of the example (every author,
/// title, journal, numbers, DOI).
inline refparse::annotate::GroundTruth fig2_truth() {
  refparse::annotate::GroundTruth t;
  t.authors = {{"Dominika", "Tkaczyk"}, {"Pawel", "Szostek"}, {"Mateusz", "Fedoryszak"},
               {"Piotr Jan", "Dendek"}, {"Lukasz", "Bolikowski"}};
  t.fields = {{Label::Title, "CERMINE: automatic extraction of structured metadata from scientific literature", true},
              {Label::Src, "International Journal on Document Analysis and Recognition", true},
              {Label::Year, "2015", true},
              {Label::Vol, "18", true},
              {Label::Issue, "4", true},
              {Label::Fpage, "317", true},
              {Label::Lpage, "335", true},
              {Label::Doi, "10.1007/s10032-015-0249-8", true}};
  return t;
}

/// Every value of the example's full field set, as used for alignment.
inline std::vector<std::string> fig2_values() {
  return {"Tkaczyk, Dominika", "Szostek, Pawel", "Fedoryszak, Mateusz", "Dendek, Piotr Jan", "Bolikowski, Lukasz",
          "CERMINE: automatic extraction of structured metadata from scientific literature",
          "International Journal on Document Analysis and Recognition", "2015", "18", "4", "317", "335",
          "10.1007/s10032-015-0249-8"};
}

// ---------------------------------------------------------------------------
// Random text.

/// Strings over a pool mixing ASCII, Unicode letters and digits of other
/// scripts, many kinds of whitespace, combining marks, astral symbols and
/// malformed UTF-8.
inline std::string random_unicode(std::mt19937_64& rng, std::size_t max_len = 40) {
  static const std::vector<std::string> pool = {
      "a", "Z", "q", "0", "7", "9", ".", ",", "-", "(", ")", "/", ":", ";", "&", "<", ">", "\"", "'",
      " ", "  ", "\t", "\n", "\r", "\xC2\xA0" /* NBSP */, "\xE2\x80\x83" /* em space */,
      "\xE3\x80\x80" /* ideographic space */, "\xC5\x81" /* Ł */, "\xC3\xBC" /* ü */, "\xCE\xA9" /* Ω */,
      "\xD0\x96" /* Ж */, "\xE4\xB8\xAD" /* 中 */, "\xD8\xB9" /* ع */, "\xD9\xA3" /* Arabic-Indic 3 */,
      "\xEF\xBC\x95" /* fullwidth 5 */, "\xCC\x81" /* combining acute */, "\xE2\x80\x93" /* – */,
      "\xE2\x88\x92" /* − */, "\xF0\x9F\x98\x80" /* emoji */, "\xF0\x9D\x90\x80" /* math bold A */,
      "\xE2\x80\x8B" /* zero-width space */, "\xFF", "\x80", "\xC3", "\xE2\x82", "\xF0\x9F\x98", "\xED\xA0\x80"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += pool[pick(rng)];
  return s;
}

// ---------------------------------------------------------------------------
// Brute-force CRF oracles over dense emission scores (n x L) and
// transitions (L x L).

inline double stable_lse(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double brute_path_score(const std::vector<double>& e, const std::vector<double>& t, std::size_t L,
                               const std::vector<std::uint8_t>& path) {
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += e[i * L + path[i]];
    if (i > 0) s += t[path[i - 1] * L + path[i]];
  }
  return s;
}

/// Calls f(path) for every one of the L^n label paths.
template <class F>
void for_each_path(std::size_t n, std::size_t L, F&& f) {
  std::vector<std::uint8_t> path(n, 0);
  for (;;) {
    f(path);
    std::size_t k = n;
    while (k > 0) {
      if (++path[k - 1] < L) break;
      path[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

struct BruteForce {
  double log_z;
  double best_score;
  std::vector<double> node;  // n x L marginals
};

inline BruteForce brute_force(const std::vector<double>& e, const std::vector<double>& t, std::size_t n,
                              std::size_t L) {
  std::vector<double> scores;
  std::vector<std::vector<std::uint8_t>> paths;
  for_each_path(n, L, [&](const std::vector<std::uint8_t>& p) {
    scores.push_back(brute_path_score(e, t, L, p));
    paths.push_back(p);
  });
  BruteForce out;
  out.log_z = stable_lse(scores);
  out.best_score = *std::max_element(scores.begin(), scores.end());
  out.node.assign(n * L, 0.0);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const double p = std::exp(scores[k] - out.log_z);
    for (std::size_t i = 0; i < n; ++i) out.node[i * L + paths[k][i]] += p;
  }
  return out;
}

/// Best total over all strictly monotone partial alignments of a similarity
/// matrix, only using cells with sim >= threshold and sim > 0.
inline double brute_alignment(const std::vector<std::vector<double>>& sim, double threshold) {
  const std::size_t n = sim.size();
  const std::size_t m = n == 0 ? 0 : sim[0].size();
  double best = 0.0;
  // Each string row chooses a column or nothing; columns must increase.
  std::vector<int> choice(n, -1);
  auto rec = [&](auto&& self, std::size_t i, int last_col, double acc) -> void {
    if (i == n) {
      best = std::max(best, acc);
      return;
    }
    self(self, i + 1, last_col, acc);
    for (int j = last_col + 1; j < static_cast<int>(m); ++j) {
      const double s = sim[i][static_cast<std::size_t>(j)];
      if (s > 0.0 && s >= threshold) self(self, i + 1, j, acc + s);
    }
  };
  rec(rec, 0, -1, 0.0);
  return best;
}

}  // namespace fixtures

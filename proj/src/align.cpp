#include "refparse/align.hpp"

#include <algorithm>

#include <json.hpp>

#include "refparse/error.hpp"
#include "refparse/evaluate.hpp"
#include "refparse/tokenize.hpp"

namespace refparse::align {

TruthValues truth_values(const ParsedReference& ref) {
  TruthValues out;
  for (const MetadataField& f : ref.fields()) out.push_back(f.value);
  return out;
}

TruthValues truth_values_from_json(std::string_view line) {
  nlohmann::ordered_json obj;
  try {
    obj = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON line: ") + e.what());
  }
  if (!obj.is_object()) throw Error("JSON line is not an object");
  TruthValues out;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_string()) out.push_back(value.get<std::string>());
    if (!value.is_array()) continue;
    for (const auto& v : value) {
      if (v.is_string()) out.push_back(v.get<std::string>());
    }
  }
  return out;
}

namespace {

void append_tokens(std::string_view s, std::vector<std::string>& out) {
  const TokenSequence seq = tokenize(s);
  for (const Token& t : seq.tokens()) {
    if (t.kind == TokenKind::Other) continue;
    out.push_back(t.kind == TokenKind::Digit ? t.text : eval::normalize_value(t.text));
  }
}

}  // namespace

std::vector<std::string> token_multiset(std::string_view s) {
  std::vector<std::string> out;
  append_tokens(s, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> token_multiset(std::span<const std::string> values) {
  std::vector<std::string> out;
  for (const std::string& v : values) append_tokens(v, out);
  std::sort(out.begin(), out.end());
  return out;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  // Both sorted: a merge walk counts the intersection; union = |a| + |b| - inter.
  std::size_t i = 0, j = 0, inter = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter, ++i, ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double similarity(std::string_view s, const TruthValues& truth) {
  const auto a = token_multiset(s);
  const auto b = token_multiset(truth);
  return jaccard(a, b);
}

double AlignmentResult::total_similarity() const noexcept {
  double t = 0.0;
  for (const AlignedPair& p : pairs) t += p.similarity;
  return t;
}

AlignmentResult align_matrix(const std::vector<std::vector<double>>& sim, double threshold) {
  const std::size_t n = sim.size();
  const std::size_t m = n == 0 ? 0 : sim[0].size();
  auto admissible = [&](std::size_t i, std::size_t j) { return sim[i][j] > 0.0 && sim[i][j] >= threshold; };

  // best[i][j]: optimum over suffixes strings[i..], truths[j..]. Tracing
  // forward from (0, 0) lets ties take the earliest pair.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      double v = std::max(best[i + 1][j], best[i][j + 1]);
      if (admissible(i, j)) v = std::max(v, sim[i][j] + best[i + 1][j + 1]);
      best[i][j] = v;
    }
  }

  AlignmentResult out;
  std::vector<bool> string_used(n, false), truth_used(m, false);
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (admissible(i, j) && best[i][j] == sim[i][j] + best[i + 1][j + 1]) {
      out.pairs.push_back({i, j, sim[i][j]});
      string_used[i] = truth_used[j] = true;
      ++i, ++j;
    } else if (best[i][j] == best[i][j + 1]) {
      ++j;
    } else {
      ++i;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!string_used[k]) out.unmatched_strings.push_back(k);
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (!truth_used[k]) out.unmatched_truths.push_back(k);
  }
  return out;
}

AlignmentResult align_lists(std::span<const std::string> strings, std::span<const TruthValues> truths,
                            double threshold) {
  if (strings.empty()) {
    AlignmentResult out;
    for (std::size_t j = 0; j < truths.size(); ++j) out.unmatched_truths.push_back(j);
    return out;
  }
  std::vector<std::vector<std::string>> truth_tokens(truths.size());
  for (std::size_t j = 0; j < truths.size(); ++j) truth_tokens[j] = token_multiset(truths[j]);
  std::vector<std::vector<double>> sim(strings.size(), std::vector<double>(truths.size(), 0.0));
  const auto n = static_cast<std::ptrdiff_t>(strings.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto a = token_multiset(strings[static_cast<std::size_t>(i)]);
    for (std::size_t j = 0; j < truths.size(); ++j) sim[static_cast<std::size_t>(i)][j] = jaccard(a, truth_tokens[j]);
  }
  return align_matrix(sim, threshold);
}

}  // namespace refparse::align

#include <algorithm>
#include <array>

#include "refparse/crf.hpp"
#include "refparse/error.hpp"
#include "refparse/text.hpp"
#include "features_internal.hpp"

namespace refparse::crf {

namespace {

constexpr std::size_t kSurfaceCap = 30;
constexpr int kWindow = 2;

constexpr std::array<std::string_view, 24> kMonths = {
    "january", "february", "march", "april", "may", "june", "july", "august",
    "september", "october", "november", "december", "jan", "feb", "mar", "apr",
    "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec"};

constexpr std::array<std::string_view, 14> kSourceWords = {
    "journal", "proceedings", "conference", "vol", "no", "pp", "doi",
    "http",    "www",         "arxiv",      "ed",  "in", "et", "al"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& list, std::string_view w) {
  return std::find(list.begin(), list.end(), w) != list.end();
}

std::string capped_lower(std::string_view s) {
  std::string lower = text::to_lower(s);
  std::size_t pos = 0;
  for (std::size_t n = 0; n < kSurfaceCap && pos < lower.size(); ++n) pos += text::decode(lower, pos).len;
  lower.resize(pos);
  return lower;
}

std::string shape_of(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::Digit:
      return tok.text.size() >= 5 ? "DIGIT5+" : "DIGIT" + std::to_string(tok.text.size());
    case TokenKind::Other:
      return tok.text;
    case TokenKind::Alpha:
      break;
  }
  std::size_t upper = 0, lower = 0, count = 0;
  bool first_upper = false;
  for (std::size_t pos = 0; pos < tok.text.size();) {
    const text::Decoded d = text::decode(tok.text, pos);
    if (text::is_upper(d.cp)) {
      ++upper;
      if (count == 0) first_upper = true;
    } else if (text::is_lower(d.cp)) {
      ++lower;
    }
    ++count;
    pos += d.len;
  }
  if (first_upper && upper == 1 && lower == count - 1) return "INITCAP";
  if (upper == count && count >= 2) return "ALLCAPS";
  if (lower == count) return "LOWER";
  return "MIXED";
}

}  // namespace

namespace detail {

TokenTemplates token_templates(const Token& tok) {
  TokenTemplates t;
  const std::string lower = capped_lower(tok.text);
  t.surface = lower;
  t.kind = std::string(to_string(tok.kind));
  t.shape = shape_of(tok);
  if (tok.kind == TokenKind::Alpha) {
    if (contains(kMonths, lower)) t.lexicons.emplace_back("month");
    if (contains(kSourceWords, lower)) t.lexicons.emplace_back("sourceword");
  }
  if (t.lexicons.empty()) t.lexicons.emplace_back("none");
  t.space = tok.preceded_by_space ? "1" : "0";
  return t;
}

std::vector<TokenTemplates> sequence_templates(const TokenSequence& seq) {
  std::vector<TokenTemplates> out;
  out.reserve(seq.size());
  for (const Token& tok : seq.tokens()) out.push_back(token_templates(tok));
  return out;
}

void position_features(const std::vector<TokenTemplates>& templates, std::size_t i, std::vector<std::string>& out) {
  const std::size_t n = templates.size();
  const TokenTemplates& c = templates[i];
  out.push_back("bias");
  out.push_back("w0=" + c.surface);
  out.push_back("kind=" + c.kind);
  out.push_back("shape=" + c.shape);
  for (const auto& lex : c.lexicons) out.push_back("lex:" + lex);
  out.push_back("space=" + c.space);
  out.push_back("pos=" + std::to_string(std::min<std::size_t>(9, 10 * i / n)));

  for (int off = -kWindow; off <= kWindow; ++off) {
    if (off == 0) continue;
    const std::string prefix = (off < 0 ? "off" : "off+") + std::to_string(off) + ":";
    const long j = static_cast<long>(i) + off;
    if (j < 0) {
      out.push_back(prefix + "BOS");
      continue;
    }
    if (j >= static_cast<long>(n)) {
      out.push_back(prefix + "EOS");
      continue;
    }
    const TokenTemplates& t = templates[static_cast<std::size_t>(j)];
    out.push_back(prefix + "w=" + t.surface);
    out.push_back(prefix + "kind=" + t.kind);
    out.push_back(prefix + "shape=" + t.shape);
    for (const auto& lex : t.lexicons) out.push_back(prefix + "lex:" + lex);
    out.push_back(prefix + "space=" + t.space);
  }
}

}  // namespace detail

std::vector<std::string> extract_features(const TokenSequence& seq, std::size_t i) {
  if (i >= seq.size()) {
    throw Error("feature position " + std::to_string(i) + " out of range for " + std::to_string(seq.size()) +
                " tokens");
  }
  // Only the window around i matters; build templates for it alone.
  std::vector<detail::TokenTemplates> templates(seq.size());
  const std::size_t lo = i >= kWindow ? i - kWindow : 0;
  const std::size_t hi = std::min(seq.size() - 1, i + kWindow);
  for (std::size_t k = lo; k <= hi; ++k) templates[k] = detail::token_templates(seq[k]);
  std::vector<std::string> out;
  detail::position_features(templates, i, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FeatureVectorizer::FeatureVectorizer(std::vector<std::string> names) {
  for (auto& name : names) {
    if (index_.contains(name)) throw Error("duplicate feature name '" + name + "'");
    index_.emplace(name, static_cast<std::uint32_t>(names_.size()));
    names_.push_back(std::move(name));
  }
}

std::optional<std::uint32_t> FeatureVectorizer::id(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FeatureVectorizer::intern(const std::string& name) {
  const auto [it, inserted] = index_.try_emplace(name, static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

FeaturizedSequence FeatureVectorizer::featurize(const TokenSequence& seq) const {
  FeaturizedSequence out;
  const auto templates = detail::sequence_templates(seq);
  std::vector<std::string> names;
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    names.clear();
    ids.clear();
    detail::position_features(templates, i, names);
    for (const auto& name : names) {
      const auto it = index_.find(name);
      if (it != index_.end()) ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    out.push_position(ids);
  }
  return out;
}

}  // namespace refparse::crf

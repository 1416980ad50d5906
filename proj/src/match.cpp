// Ground-truth matching for training-data preparation.

#include <algorithm>
#include <functional>
#include <regex>

#include "refparse/annotate.hpp"
#include "refparse/evaluate.hpp"
#include "refparse/text.hpp"

namespace refparse::annotate {

namespace {

// Tokens around a matched surname searched for given names.
constexpr std::size_t kGivenNameWindow = 6;

std::u32string to_u32(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const text::Decoded d = text::decode(s, i);
    out.push_back(d.cp);
    i += d.len;
  }
  return out;
}

std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Coarse order in which fields usually appear in a reference.
int prior_rank(Label l) {
  switch (l) {
    case Label::AuSn:
    case Label::AuFn:
    case Label::Org: return 0;
    case Label::Title: return 1;
    case Label::Src: return 2;
    default: return 3;
  }
}

struct Target {
  Label label;
  std::string norm;  // normalized value
  std::vector<std::string> norm_tokens;
  std::u32string chars;
  bool required;
  std::optional<std::size_t> author;  // index into truth.authors for surnames
  std::size_t input_order;
};

struct Placement {
  std::size_t first;
  std::size_t last;
  int rank;
};

class Matcher {
 public:
  Matcher(std::string_view s, const GroundTruth& truth)
      : tokens_(tokenize(s)), labels_(tokens_.size(), Label::Oth), claimed_(tokens_.size(), false), truth_(truth) {
    norm_.reserve(tokens_.size());
    for (const Token& t : tokens_.tokens()) norm_.push_back(eval::normalize_value(t.text));
  }

  MatchResult run() {
    std::vector<Target> targets = build_targets();
    std::stable_sort(targets.begin(), targets.end(),
                     [](const Target& a, const Target& b) { return a.chars.size() > b.chars.size(); });

    MatchResult result;
    for (const Target& t : targets) {
      if (t.norm_tokens.empty()) continue;
      const auto span = locate(t);
      if (!span) {
        if (t.required) result.unmatched.push_back(std::string(to_string(t.label)) + ": " + t.norm);
        continue;
      }
      claim(span->first, span->second, t.label);
      if (t.author) assign_given_names(truth_.authors[*t.author].given, span->first, span->second);
    }
    if (result.unmatched.empty()) result.sequence = LabeledSequence(tokens_, labels_);
    return result;
  }

 private:
  std::vector<Target> build_targets() const {
    std::vector<Target> out;
    auto add = [&](Label label, std::string_view value, bool required, std::optional<std::size_t> author) {
      Target t{label, eval::normalize_value(value), {}, {}, required, author, out.size()};
      const TokenSequence vt = tokenize(t.norm);
      for (const Token& tok : vt.tokens()) t.norm_tokens.push_back(tok.text);
      t.chars = to_u32(t.norm);
      out.push_back(std::move(t));
    };
    for (std::size_t a = 0; a < truth_.authors.size(); ++a) {
      add(Label::AuSn, truth_.authors[a].surname, a == 0, a);
    }
    for (const TruthField& f : truth_.fields) add(f.label, f.value, f.required, std::nullopt);
    return out;
  }

  bool free_range(std::size_t first, std::size_t last) const {
    for (std::size_t k = first; k <= last; ++k) {
      if (claimed_[k]) return false;
    }
    return true;
  }

  int agreement(std::size_t pos, int rank) const {
    int score = 0;
    for (const Placement& p : placed_) {
      if (p.rank == rank) continue;
      const bool before = p.first < pos;
      score += ((p.rank < rank) == before) ? 1 : -1;
    }
    return score;
  }

  std::u32string span_chars(std::size_t first, std::size_t last) const {
    std::string s = norm_[first];
    for (std::size_t k = first + 1; k <= last; ++k) {
      if (tokens_[k].preceded_by_space) s.push_back(' ');
      s += norm_[k];
    }
    return to_u32(s);
  }

  std::optional<std::pair<std::size_t, std::size_t>> locate(const Target& t) const {
    const int rank = prior_rank(t.label);
    const std::size_t n = tokens_.size();
    const std::size_t k = t.norm_tokens.size();

    struct Candidate {
      std::size_t first, last, distance;
      int agreement;
    };
    std::optional<Candidate> best;
    auto consider = [&](const Candidate& c) {
      if (!best || c.distance < best->distance ||
          (c.distance == best->distance && c.agreement > best->agreement)) {
        best = c;  // leftmost wins remaining ties: candidates arrive in start order
      }
    };

    for (std::size_t i = 0; i + k <= n; ++i) {
      bool equal = true;
      for (std::size_t j = 0; j < k && equal; ++j) equal = norm_[i + j] == t.norm_tokens[j];
      if (equal && free_range(i, i + k - 1)) consider({i, i + k - 1, 0, agreement(i, rank)});
    }
    if (best) return std::make_pair(best->first, best->last);

    const std::size_t tolerance = t.chars.size() / 10;
    if (tolerance == 0) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n && !claimed_[j]; ++j) {
        const std::u32string cand = span_chars(i, j);
        if (cand.size() > t.chars.size() + tolerance) break;
        if (cand.size() + tolerance < t.chars.size()) continue;
        const std::size_t d = edit_distance(cand, t.chars);
        if (d <= tolerance) consider({i, j, d, agreement(i, rank)});
      }
    }
    if (best) return std::make_pair(best->first, best->last);
    return std::nullopt;
  }

  void claim(std::size_t first, std::size_t last, Label label) {
    for (std::size_t k = first; k <= last; ++k) {
      claimed_[k] = true;
      labels_[k] = label;
    }
    placed_.push_back({first, last, prior_rank(label)});
  }

  std::optional<std::size_t> nearest_free(std::size_t sn_first, std::size_t sn_last,
                                          const std::function<bool(std::size_t)>& pred) const {
    const std::size_t lo = sn_first >= kGivenNameWindow ? sn_first - kGivenNameWindow : 0;
    const std::size_t hi = std::min(tokens_.size() - 1, sn_last + kGivenNameWindow);
    std::optional<std::size_t> best;
    std::size_t best_dist = 0;
    for (std::size_t k = lo; k <= hi; ++k) {
      if (claimed_[k] || tokens_[k].kind != TokenKind::Alpha || !pred(k)) continue;
      const std::size_t dist = k < sn_first ? sn_first - k : k - sn_last;
      if (!best || dist < best_dist) best = k, best_dist = dist;
    }
    return best;
  }

  void assign_given_names(std::string_view given, std::size_t sn_first, std::size_t sn_last) {
    std::vector<std::string> parts;
    const TokenSequence given_tokens = tokenize(eval::normalize_value(given));
    for (const Token& tok : given_tokens.tokens()) {
      if (tok.kind == TokenKind::Alpha) parts.push_back(tok.text);
    }
    if (parts.empty()) return;

    if (parts.size() > 1) {
      std::string initials;
      for (const auto& p : parts) initials += text::to_lower(text::upper_initial(p));
      const auto hit = nearest_free(sn_first, sn_last, [&](std::size_t k) { return norm_[k] == initials; });
      if (hit) return claim_given(*hit);
    }
    for (const auto& part : parts) {
      const std::string initial = text::to_lower(text::upper_initial(part));
      auto hit = nearest_free(sn_first, sn_last, [&](std::size_t k) { return norm_[k] == part; });
      if (!hit) hit = nearest_free(sn_first, sn_last, [&](std::size_t k) { return norm_[k] == initial; });
      // A bare initial in the truth also covers the spelled-out name.
      if (!hit && part == initial) {
        hit = nearest_free(sn_first, sn_last, [&](std::size_t k) { return norm_[k].starts_with(initial); });
      }
      if (hit) claim_given(*hit);
    }
  }

  void claim_given(std::size_t k) {
    claimed_[k] = true;
    labels_[k] = Label::AuFn;
  }

  TokenSequence tokens_;
  std::vector<std::string> norm_;
  std::vector<Label> labels_;
  std::vector<bool> claimed_;
  std::vector<Placement> placed_;
  const GroundTruth& truth_;
};

}  // namespace

GroundTruth truth_from_parsed(const ParsedReference& ref) {
  static const std::regex doi_re(R"(^10\.\d{4,9}/\S+$)");
  static const std::regex url_re(R"(^https?://\S+$)", std::regex::icase);
  static const std::regex arxiv_re(R"(^(arxiv:\s*)?(\d{4}\.\d{4,5}(v\d+)?|[a-z\-]+(\.[A-Z]{2})?/\d{7})$)",
                                   std::regex::icase);
  GroundTruth truth;
  for (const MetadataField& f : ref.fields()) {
    switch (f.type) {
      case FieldType::Author: {
        const auto comma = f.value.rfind(',');
        if (comma == std::string::npos) {
          truth.authors.push_back({"", std::string(text::trim(f.value))});
        } else {
          truth.authors.push_back({std::string(text::trim(std::string_view(f.value).substr(comma + 1))),
                                   std::string(text::trim(std::string_view(f.value).substr(0, comma)))});
        }
        break;
      }
      case FieldType::Source: {
        const std::string v(text::trim(f.value));
        Label l = Label::Src;
        if (std::regex_match(v, doi_re)) l = Label::Doi;
        else if (std::regex_match(v, url_re)) l = Label::Url;
        else if (std::regex_match(v, arxiv_re)) l = Label::Arxiv;
        truth.fields.push_back({l, f.value, true});
        break;
      }
      case FieldType::Year: truth.fields.push_back({Label::Year, f.value, true}); break;
      case FieldType::Volume: truth.fields.push_back({Label::Vol, f.value, true}); break;
      case FieldType::Issue: truth.fields.push_back({Label::Issue, f.value, true}); break;
      case FieldType::Page: truth.fields.push_back({Label::Fpage, f.value, true}); break;
      case FieldType::Organization: truth.fields.push_back({Label::Org, f.value, true}); break;
    }
  }
  return truth;
}

MatchResult match_fields_to_string(std::string_view s, const GroundTruth& truth) {
  return Matcher(s, truth).run();
}

}  // namespace refparse::annotate

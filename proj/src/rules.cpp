#include "refparse/rules.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "refparse/error.hpp"
#include "refparse/text.hpp"

namespace refparse::rules {

namespace {

// Hyphen-like range separators, as byte sequences.
#define RP_DASH "(?:-|\u2010|\u2011|\u2012|\u2013|\u2014|\u2212)"

constexpr const char* kDefaultRules =
    "year\t(?:19|20)\\d{2}\tyear\n"
    "page\t[Pp][Pp]\\.?\\s*(\\d{1,6})\\s*" RP_DASH "\\s*(\\d{1,6})\tpage-range\n"
    "page\t[Pp]ages\\s+(\\d{1,6})\\s*" RP_DASH "\\s*(\\d{1,6})\tpage-range\n"
    "page\t(\\d{1,6})\\s*" RP_DASH "\\s*(\\d{1,6})\tpage-range\n"
    "volume\t\\b(?:[Vv]ol\\.?|[Vv]olume)\\s*(\\d+)\tgroup\t1\n"
    "volume\t(\\d+)\\((\\d{1,3})\\)\tgroup\t1\n"
    "issue\t\\b(?:[Nn]o\\.|[Ii]ssue)\\s*(\\d+)\tgroup\t1\n"
    "issue\t(\\d+)\\((\\d{1,3})\\)\tgroup\t2\n"
    "source\t10\\.\\d{4,9}/\\S+\tidentifier\t0\n"
    "source\thttps?://\\S+\tidentifier\t0\n"
    "source\tarXiv:\\s*(\\d{4}\\.\\d{4,5}(?:v\\d+)?)\tidentifier\t1\n"
    "source\t[A-Z][A-Za-z]*(?:\\.[A-Z]?[a-z]*)*(?:\\s+(?:(?:of|on|and|for|the|in|&)\\s+)*[A-Z][A-Za-z]*(?:\\.[A-Z]?[a-z]*)*)*\tsource-run\n"
    "author\t^\\s*([A-Z][A-Za-z'\\-]+),\\s*([A-Z])\\.\tauthor-sf\n"
    "author\t^\\s*([A-Z])\\.(?:\\s*[A-Z]\\.)*\\s*([A-Z][A-Za-z'\\-]+)\tauthor-fs\n";

// Leading author block: "Surname, F. F." or "F. F. Surname" items joined by
// commas, semicolons, "&" or "and", optionally closed by "et al.".
const std::regex& author_block() {
  static const std::regex re(
      "^\\s*(?:(?:[A-Z][A-Za-z'\\-]+,\\s*(?:[A-Z]\\.\\s*)+|(?:[A-Z]\\.\\s*)+[A-Z][A-Za-z'\\-]+)"
      "(?:\\s*(?:,|;|&|and\\b)\\s*)*)+(?:et al\\.)?");
  return re;
}

struct PolicyName {
  std::string_view name;
  CapturePolicy policy;
};

constexpr std::array<PolicyName, 7> kPolicies = {{
    {"group", CapturePolicy::Group},
    {"year", CapturePolicy::Year},
    {"page-range", CapturePolicy::PageRange},
    {"identifier", CapturePolicy::Identifier},
    {"author-sf", CapturePolicy::AuthorSurnameFirst},
    {"author-fs", CapturePolicy::AuthorGivenFirst},
    {"source-run", CapturePolicy::SourceRun},
}};

bool is_digit_at(std::string_view s, std::size_t i) { return i < s.size() && text::is_ascii_digit(s[i]); }

// Code point ending right before byte `end`.
char32_t cp_before(std::string_view s, std::size_t end, std::size_t* start = nullptr) {
  if (end == 0) return 0;
  std::size_t b = end - 1;
  while (b > 0 && (static_cast<unsigned char>(s[b]) & 0xC0) == 0x80 && end - b < 4) --b;
  const text::Decoded d = text::decode(s, b);
  if (b + d.len != end) {
    if (start) *start = end - 1;
    return static_cast<unsigned char>(s[end - 1]);
  }
  if (start) *start = b;
  return d.cp;
}

std::size_t skip_space_back(std::string_view s, std::size_t pos) {
  while (pos > 0) {
    std::size_t b;
    const char32_t c = cp_before(s, pos, &b);
    if (!text::is_space(c)) break;
    pos = b;
  }
  return pos;
}

std::size_t skip_space_fwd(std::string_view s, std::size_t pos) {
  while (pos < s.size()) {
    const text::Decoded d = text::decode(s, pos);
    if (!text::is_space(d.cp)) break;
    pos += d.len;
  }
  return pos;
}

// Digits on either side of [b, e) across a hyphen-like separator.
bool inside_numeric_range(std::string_view s, std::size_t b, std::size_t e) {
  std::size_t p = skip_space_back(s, b);
  if (p > 0) {
    std::size_t h;
    if (text::is_hyphen_like(cp_before(s, p, &h))) {
      const std::size_t q = skip_space_back(s, h);
      if (q > 0 && text::is_ascii_digit(s[q - 1])) return true;
    }
  }
  p = skip_space_fwd(s, e);
  if (p < s.size()) {
    const text::Decoded d = text::decode(s, p);
    if (text::is_hyphen_like(d.cp) && is_digit_at(s, skip_space_fwd(s, p + d.len))) return true;
  }
  return false;
}

bool word_char_before(std::string_view s, std::size_t b) {
  if (b == 0) return false;
  const char32_t c = cp_before(s, b);
  return text::is_letter(c) || (c < 0x80 && text::is_ascii_digit(static_cast<char>(c))) || c == '/' ||
         text::is_hyphen_like(c);
}

bool word_char_after(std::string_view s, std::size_t e) {
  if (e >= s.size()) return false;
  const char32_t c = text::decode(s, e).cp;
  return text::is_letter(c) || (c < 0x80 && text::is_ascii_digit(static_cast<char>(c))) || c == '/' ||
         text::is_hyphen_like(c);
}

unsigned long to_number(std::string_view digits) {
  unsigned long v = 0;
  std::from_chars(digits.data(), digits.data() + digits.size(), v);
  return v;
}

std::string_view trim_identifier(std::string_view v) {
  while (!v.empty() && std::string_view(".,;:)]").find(v.back()) != std::string_view::npos) v.remove_suffix(1);
  return v;
}

struct Context {
  std::string_view original;
  std::string masked;  // identifier matches blanked out
  std::size_t author_end = 0;
  std::size_t year_pos = 0;
};

using Iter = std::string::const_iterator;

struct Found {
  std::string value;
  std::size_t pos = 0;
};

std::optional<Found> apply(const Rule& rule, const Context& ctx) {
  const std::string& m = ctx.masked;
  const std::string_view s = ctx.original;
  auto at = [&](const std::smatch& match, int g) {
    return s.substr(static_cast<std::size_t>(match.position(g)), static_cast<std::size_t>(match.length(g)));
  };
  auto found = [&](const std::smatch& match, int g, std::string_view v) {
    return Found{std::string(v), static_cast<std::size_t>(match.position(g))};
  };

  switch (rule.policy) {
    case CapturePolicy::Identifier: {
      // Identifier rules see the unmasked text.
      const std::string orig(s);
      std::smatch match;
      if (!std::regex_search(orig, match, rule.regex)) return std::nullopt;
      const std::string_view v = trim_identifier(at(match, rule.group));
      if (v.empty()) return std::nullopt;
      return found(match, rule.group, v);
    }
    case CapturePolicy::Group: {
      std::smatch match;
      if (!std::regex_search(m, match, rule.regex)) return std::nullopt;
      if (!match[rule.group].matched || match.length(rule.group) == 0) return std::nullopt;
      return found(match, rule.group, at(match, rule.group));
    }
    case CapturePolicy::Year: {
      for (std::sregex_iterator it(m.begin(), m.end(), rule.regex), end; it != end; ++it) {
        const auto b = static_cast<std::size_t>(it->position(0));
        const auto e = b + static_cast<std::size_t>(it->length(0));
        if ((b > 0 && text::is_ascii_digit(s[b - 1])) || is_digit_at(s, e)) continue;
        if (inside_numeric_range(s, b, e)) continue;
        return Found{std::string(s.substr(b, e - b)), b};
      }
      return std::nullopt;
    }
    case CapturePolicy::PageRange: {
      for (std::sregex_iterator it(m.begin(), m.end(), rule.regex), end; it != end; ++it) {
        const std::smatch& match = *it;
        if (match.size() < 3 || !match[1].matched || !match[2].matched) continue;
        const auto b = static_cast<std::size_t>(match.position(0));
        const auto e = b + static_cast<std::size_t>(match.length(0));
        if (word_char_before(s, b) || word_char_after(s, e)) continue;
        const std::string_view a = at(match, 1);
        if (to_number(a) < to_number(at(match, 2))) return found(match, 1, a);
      }
      return std::nullopt;
    }
    case CapturePolicy::AuthorSurnameFirst:
    case CapturePolicy::AuthorGivenFirst: {
      std::smatch match;
      if (!std::regex_search(m, match, rule.regex) || match.size() < 3) return std::nullopt;
      const bool sf = rule.policy == CapturePolicy::AuthorSurnameFirst;
      const std::string surname(at(match, sf ? 1 : 2));
      const std::string given(at(match, sf ? 2 : 1));
      const std::array<std::string, 1> g{given};
      const std::array<std::string, 1> sn{surname};
      return Found{format_first_author(g, sn).text, static_cast<std::size_t>(match.position(0))};
    }
    case CapturePolicy::SourceRun: {
      if (ctx.year_pos <= ctx.author_end) return std::nullopt;
      const std::string region = m.substr(ctx.author_end, ctx.year_pos - ctx.author_end);
      std::size_t best_b = 0, best_len = 0, best_words = 0;
      for (std::sregex_iterator it(region.begin(), region.end(), rule.regex), end; it != end; ++it) {
        std::size_t b = static_cast<std::size_t>(it->position(0));
        std::string_view run(region.data() + b, static_cast<std::size_t>(it->length(0)));
        if (run.starts_with("In ") && run.size() > 3) {
          const std::size_t skip = skip_space_fwd(run, 3);
          run.remove_prefix(skip);
          b += skip;
        }
        while (!run.empty() && run.back() == '.') run.remove_suffix(1);
        const auto words = static_cast<std::size_t>(std::count(run.begin(), run.end(), ' ')) + 1;
        if (words > best_words || (words == best_words && run.size() > best_len)) {
          best_b = b, best_len = run.size(), best_words = words;
        }
      }
      if (best_len == 0) return std::nullopt;
      return Found{std::string(s.substr(ctx.author_end + best_b, best_len)), ctx.author_end + best_b};
    }
  }
  return std::nullopt;
}

}  // namespace

void RuleSet::add(FieldType field, std::string pattern, CapturePolicy policy, int group) {
  Rule rule{field, std::move(pattern), policy, group, {}};
  try {
    rule.regex = std::regex(rule.pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error("rule pattern does not compile: " + rule.pattern + " (" + e.what() + ")");
  }
  if (rule.group < 0 || static_cast<std::size_t>(rule.group) > rule.regex.mark_count()) {
    if (rule.group == 1 && rule.regex.mark_count() == 0) {
      rule.group = 0;
    } else {
      throw Error("rule group out of range: " + rule.pattern);
    }
  }
  if ((policy == CapturePolicy::PageRange || policy == CapturePolicy::AuthorSurnameFirst ||
       policy == CapturePolicy::AuthorGivenFirst) &&
      rule.regex.mark_count() < 2) {
    throw Error("rule needs two capture groups: " + rule.pattern);
  }
  rules_.push_back(std::move(rule));
}

RuleSet RuleSet::parse(std::string_view text_in) {
  RuleSet set;
  std::size_t line_no = 0;
  while (!text_in.empty()) {
    const std::size_t nl = text_in.find('\n');
    std::string_view line = text_in.substr(0, nl);
    text_in = nl == std::string_view::npos ? std::string_view{} : text_in.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;

    std::vector<std::string_view> cols;
    for (std::size_t pos = 0;;) {
      const std::size_t tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    const std::string where = "rule line " + std::to_string(line_no) + ": ";
    if (cols.size() < 2 || cols.size() > 4) throw Error(where + "expected <field>\\t<pattern>");
    const auto field = parse_field_type(text::trim(cols[0]));
    if (!field) throw Error(where + "unknown field '" + std::string(cols[0]) + "'");
    CapturePolicy policy = CapturePolicy::Group;
    int group = 1;
    if (cols.size() >= 3) {
      const auto name = text::trim(cols[2]);
      const auto it = std::find_if(kPolicies.begin(), kPolicies.end(), [&](const auto& p) { return p.name == name; });
      if (it == kPolicies.end()) throw Error(where + "unknown policy '" + std::string(name) + "'");
      policy = it->policy;
    }
    if (cols.size() == 4) {
      const auto g = text::trim(cols[3]);
      const auto r = std::from_chars(g.data(), g.data() + g.size(), group);
      if (r.ec != std::errc{} || r.ptr != g.data() + g.size()) throw Error(where + "bad group index");
    }
    try {
      set.add(*field, std::string(cols[1]), policy, group);
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  return set;
}

RuleSet RuleSet::defaults() {
  static const RuleSet set = parse(kDefaultRules);
  return set;
}

ParsedReference rule_parse(std::string_view s, const RuleSet& rules) {
  ParsedReference out;
  Context ctx;
  ctx.original = s;
  ctx.masked = std::string(s);
  const std::string orig(s);
  for (const Rule& rule : rules.rules()) {
    if (rule.policy != CapturePolicy::Identifier) continue;
    for (std::sregex_iterator it(orig.begin(), orig.end(), rule.regex), end; it != end; ++it) {
      std::fill_n(ctx.masked.begin() + it->position(0), it->length(0), ' ');
    }
  }
  std::smatch block;
  if (std::regex_search(ctx.masked, block, author_block())) {
    ctx.author_end = static_cast<std::size_t>(block.position(0) + block.length(0));
  }
  ctx.year_pos = s.size();

  for (const Rule& rule : rules.rules()) {
    if (out.has(rule.field)) continue;
    auto hit = apply(rule, ctx);
    if (!hit) continue;
    if (rule.policy == CapturePolicy::Year) ctx.year_pos = hit->pos;
    out.set(rule.field, std::move(hit->value));
  }
  out.source_string = std::string(s);
  return out;
}

std::vector<ParsedReference> rule_parse_all(std::span<const std::string> strings, const RuleSet& rules) {
  std::vector<ParsedReference> out(strings.size());
  const auto n = static_cast<std::ptrdiff_t>(strings.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::string& s = strings[static_cast<std::size_t>(i)];
    if (text::trim(s).empty()) continue;
    out[static_cast<std::size_t>(i)] = rule_parse(s, rules);
  }
  return out;
}

}  // namespace refparse::rules

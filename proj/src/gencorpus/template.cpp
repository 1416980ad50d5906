// Style template parsing and rendering.

#include <algorithm>
#include <array>
#include <json.hpp>

#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/text.hpp"
#include "refparse/tokenize.hpp"

namespace refparse::gen {

namespace {

constexpr std::array<std::string_view, 12> kFieldNames = {
    "authors", "title", "source", "year", "volume", "issue", "fpage", "lpage", "doi", "url", "arxiv", "organization"};

bool known_variant(std::string_view field, std::string_view variant) {
  if (variant.empty()) return true;
  if (field == "source") return variant == "abbrev" || variant == "abbrev-nodot";
  if (field == "lpage") return variant == "short";
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view style) : s_(text), style_(style) {}

  Sequence parse_all() {
    Sequence seq = parse_sequence(false);
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return seq;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("style '" + std::string(style_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  static void push_literal(Sequence& seq, std::string_view lit) {
    if (!seq.empty() && seq.back().kind == Segment::Kind::Literal) {
      seq.back().text += lit;
    } else {
      Segment seg;
      seg.text = std::string(lit);
      seq.push_back(std::move(seg));
    }
  }

  Sequence parse_sequence(bool in_group) {
    Sequence seq;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= s_.size()) fail("dangling escape");
        push_literal(seq, s_.substr(pos_ + 1, 1));
        pos_ += 2;
      } else if (c == '{') {
        seq.push_back(parse_placeholder());
      } else if (c == '[') {
        ++pos_;
        Segment group;
        group.kind = Segment::Kind::Group;
        for (;;) {
          group.alternatives.push_back(parse_sequence(true));
          if (pos_ >= s_.size()) fail("unterminated '['");
          if (s_[pos_++] == ']') break;
        }
        seq.push_back(std::move(group));
      } else if (in_group && (c == '|' || c == ']')) {
        return seq;
      } else if (c == '}' || c == ']' || c == '|') {
        fail("unexpected '" + std::string(1, c) + "'");
      } else {
        push_literal(seq, s_.substr(pos_, 1));
        ++pos_;
      }
    }
    return seq;
  }

  std::string quoted() {
    if (pos_ >= s_.size() || s_[pos_] != '"') fail("expected '\"'");
    std::string out;
    for (++pos_; pos_ < s_.size() && s_[pos_] != '"'; ++pos_) {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  void skip_blanks() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  Segment parse_placeholder() {
    ++pos_;  // '{'
    std::size_t name_end = pos_;
    while (name_end < s_.size() && s_[name_end] != '}' && s_[name_end] != ':') ++name_end;
    Segment seg;
    seg.kind = Segment::Kind::Field;
    seg.text = std::string(s_.substr(pos_, name_end - pos_));
    if (std::find(kFieldNames.begin(), kFieldNames.end(), seg.text) == kFieldNames.end()) {
      fail("unknown field '" + seg.text + "'");
    }
    pos_ = name_end;
    if (pos_ >= s_.size()) fail("unterminated '{'");

    if (seg.text == "authors") {
      seg.kind = Segment::Kind::Authors;
      if (s_[pos_] == ':') {
        ++pos_;
        seg.authors.pattern = quoted();
        for (skip_blanks(); pos_ < s_.size() && s_[pos_] != '}'; skip_blanks()) {
          std::size_t eq = s_.find('=', pos_);
          if (eq == std::string_view::npos) fail("expected option=value");
          const std::string key(s_.substr(pos_, eq - pos_));
          pos_ = eq + 1;
          const std::string value = quoted();
          if (key == "sep") {
            seg.authors.sep = value;
          } else if (key == "last") {
            seg.authors.last = value;
          } else if (key == "etal") {
            seg.authors.etal = value;
          } else if (key == "max") {
            try {
              seg.authors.max = static_cast<std::size_t>(std::stoul(value));
            } catch (const std::exception&) {
              fail("bad max");
            }
          } else {
            fail("unknown author option '" + key + "'");
          }
        }
      }
    } else if (s_[pos_] == ':') {
      const std::size_t close = s_.find('}', pos_);
      if (close == std::string_view::npos) fail("unterminated '{'");
      seg.variant = std::string(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close;
      if (!known_variant(seg.text, seg.variant)) fail("unknown variant '" + seg.variant + "' of " + seg.text);
    }
    if (pos_ >= s_.size() || s_[pos_] != '}') fail("unterminated '{'");
    ++pos_;
    return seg;
  }

  std::string_view s_;
  std::string_view style_;
  std::size_t pos_ = 0;
};

// Pieces of an author pattern.
enum class NamePiece { Literal, Surname, Given, InitialsDotted, InitialsBare };

struct PatternPart {
  NamePiece piece;
  std::string literal;
};

std::vector<PatternPart> split_pattern(std::string_view p) {
  static constexpr std::array<std::pair<std::string_view, NamePiece>, 4> kKeys = {{
      {"Surname", NamePiece::Surname},
      {"Given", NamePiece::Given},
      {"F.", NamePiece::InitialsDotted},
      {"F", NamePiece::InitialsBare},
  }};
  std::vector<PatternPart> parts;
  for (std::size_t i = 0; i < p.size();) {
    bool matched = false;
    for (const auto& [key, piece] : kKeys) {
      if (p.substr(i, key.size()) == key) {
        parts.push_back({piece, {}});
        i += key.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (parts.empty() || parts.back().piece != NamePiece::Literal) parts.push_back({NamePiece::Literal, {}});
    parts.back().literal += p[i++];
  }
  return parts;
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size();) {
    const text::Decoded d = text::decode(s, i);
    if (text::is_space(d.cp)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.append(s.substr(i, d.len));
    }
    i += d.len;
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string initials(std::string_view given, bool dotted) {
  std::string out;
  for (const std::string& w : words_of(given)) {
    if (dotted && !out.empty()) out += ' ';
    out += text::upper_initial(w);
    if (dotted) out += '.';
  }
  return out;
}

std::string short_last_page(int fpage, int lpage) {
  const std::string f = std::to_string(fpage);
  const std::string l = std::to_string(lpage);
  if (f.size() != l.size()) return l;
  std::size_t k = 0;
  while (k + 1 < l.size() && f[k] == l[k]) ++k;
  return l.substr(k);
}

struct Span {
  std::size_t begin;
  std::size_t end;
  Label label;
};

class Renderer {
 public:
  Renderer(const SourceRecord& rec, const StyleTemplate& style) : rec_(rec), style_(style) {}

  void render(const Sequence& seq) {
    for (const Segment& seg : seq) render(seg);
  }

  std::string out;
  std::vector<Span> spans;
  // Rendered values, for the truth record.
  std::optional<std::string> first_author;
  std::optional<Label> source_label;
  std::string source_value;
  std::vector<std::pair<FieldType, std::string>> values;

 private:
  bool present(const Segment& seg) const {
    if (seg.kind == Segment::Kind::Authors) return !rec_.authors.empty();
    if (seg.kind != Segment::Kind::Field) return true;
    const std::string& f = seg.text;
    if (f == "title") return !style_.omit_title && !rec_.title.empty();
    if (f == "source") return !rec_.source.empty();
    if (f == "year") return true;
    if (f == "volume") return rec_.volume.has_value();
    if (f == "issue") return rec_.issue.has_value();
    if (f == "fpage") return rec_.fpage.has_value();
    if (f == "lpage") return rec_.lpage.has_value() && (seg.variant.empty() || rec_.fpage.has_value());
    if (f == "doi") return rec_.doi.has_value();
    if (f == "url") return rec_.url.has_value();
    if (f == "arxiv") return rec_.arxiv.has_value();
    if (f == "organization") return rec_.organization.has_value();
    return false;
  }

  bool all_present(const Sequence& seq) const {
    return std::all_of(seq.begin(), seq.end(), [&](const Segment& s) { return present(s); });
  }

  void literal(std::string_view lit) {
    if (after_value_ && !lit.empty() && lit.front() == '.' && !out.empty() &&
        (out.back() == '.' || out.back() == '?' || out.back() == '!')) {
      lit.remove_prefix(1);
    }
    out += lit;
    after_value_ = false;
  }

  void value(std::string_view v, Label label) {
    if (v.empty()) return;
    spans.push_back({out.size(), out.size() + v.size(), label});
    out += v;
  }

  void render(const Segment& seg) {
    switch (seg.kind) {
      case Segment::Kind::Literal:
        literal(seg.text);
        return;
      case Segment::Kind::Group:
        for (const Sequence& alt : seg.alternatives) {
          if (all_present(alt)) {
            render(alt);
            return;
          }
        }
        return;
      case Segment::Kind::Authors:
        if (!present(seg)) throw Error("style '" + style_.name + "' requires authors");
        render_authors(seg.authors);
        after_value_ = true;
        return;
      case Segment::Kind::Field:
        break;
    }
    if (style_.omit_title && seg.text == "title") return;
    if (!present(seg)) throw Error("style '" + style_.name + "' requires field '" + seg.text + "'");
    render_field(seg);
    after_value_ = true;
  }

  void render_field(const Segment& seg) {
    const std::string& f = seg.text;
    if (f == "title") {
      value(rec_.title, Label::Title);
    } else if (f == "source") {
      std::string v = rec_.source;
      if (!seg.variant.empty() && !rec_.source_abbrev.empty()) v = rec_.source_abbrev;
      if (seg.variant == "abbrev-nodot") v.erase(std::remove(v.begin(), v.end(), '.'), v.end());
      set_source(Label::Src, v);
      value(v, Label::Src);
    } else if (f == "year") {
      emit_number(FieldType::Year, Label::Year, std::to_string(rec_.year));
    } else if (f == "volume") {
      emit_number(FieldType::Volume, Label::Vol, std::to_string(*rec_.volume));
    } else if (f == "issue") {
      emit_number(FieldType::Issue, Label::Issue, std::to_string(*rec_.issue));
    } else if (f == "fpage") {
      emit_number(FieldType::Page, Label::Fpage, std::to_string(*rec_.fpage));
    } else if (f == "lpage") {
      value(seg.variant == "short" ? short_last_page(*rec_.fpage, *rec_.lpage) : std::to_string(*rec_.lpage),
            Label::Lpage);
    } else if (f == "doi") {
      set_source(Label::Doi, *rec_.doi);
      value(*rec_.doi, Label::Doi);
    } else if (f == "url") {
      set_source(Label::Url, *rec_.url);
      value(*rec_.url, Label::Url);
    } else if (f == "arxiv") {
      set_source(Label::Arxiv, *rec_.arxiv);
      value(*rec_.arxiv, Label::Arxiv);
    } else if (f == "organization") {
      add_value(FieldType::Organization, *rec_.organization);
      value(*rec_.organization, Label::Org);
    }
  }

  void emit_number(FieldType type, Label label, const std::string& v) {
    add_value(type, v);
    value(v, label);
  }

  void add_value(FieldType type, const std::string& v) {
    if (std::none_of(values.begin(), values.end(), [&](const auto& p) { return p.first == type; })) {
      values.emplace_back(type, v);
    }
  }

  static int source_rank(Label l) {
    switch (l) {
      case Label::Src: return 0;
      case Label::Doi: return 1;
      case Label::Arxiv: return 2;
      default: return 3;
    }
  }

  void set_source(Label label, const std::string& v) {
    if (!source_label || source_rank(label) < source_rank(*source_label)) {
      source_label = label;
      source_value = v;
    }
  }

  void render_authors(const AuthorFormat& fmt) {
    const auto parts = split_pattern(fmt.pattern);
    const bool uses_given = std::any_of(parts.begin(), parts.end(), [](const PatternPart& p) {
      return p.piece == NamePiece::Given || p.piece == NamePiece::InitialsDotted || p.piece == NamePiece::InitialsBare;
    });
    const std::size_t total = rec_.authors.size();
    const bool truncated = fmt.max > 0 && total > fmt.max;
    const std::size_t shown = truncated ? fmt.max : total;
    for (std::size_t k = 0; k < shown; ++k) {
      if (k > 0) {
        const bool final_one = !truncated && k + 1 == shown && fmt.last;
        out += final_one ? *fmt.last : fmt.sep;
      }
      const Author& a = rec_.authors[k];
      if (a.given.empty()) {
        value(a.surname, Label::AuSn);
      } else {
        for (const PatternPart& p : parts) {
          switch (p.piece) {
            case NamePiece::Literal: out += p.literal; break;
            case NamePiece::Surname: value(a.surname, Label::AuSn); break;
            case NamePiece::Given: value(a.given, Label::AuFn); break;
            case NamePiece::InitialsDotted: value(initials(a.given, true), Label::AuFn); break;
            case NamePiece::InitialsBare: value(initials(a.given, false), Label::AuFn); break;
          }
        }
      }
      if (k == 0) {
        std::vector<std::string> given;
        if (uses_given && !a.given.empty()) given = words_of(a.given);
        first_author = format_first_author(given, words_of(a.surname)).text;
      }
    }
    if (truncated) out += fmt.etal;
  }

  const SourceRecord& rec_;
  const StyleTemplate& style_;
  bool after_value_ = false;
};

}  // namespace

StyleTemplate StyleTemplate::parse(std::string name, std::string_view text, bool omit_title) {
  StyleTemplate st;
  st.segments = Parser(text, name).parse_all();
  st.name = std::move(name);
  st.omit_title = omit_title;
  return st;
}

std::vector<StyleTemplate> parse_style_file(std::string_view text) {
  std::vector<StyleTemplate> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string_view::npos) throw Error("style line " + std::to_string(line_no) + ": expected <name>\\t<template>");
    std::string_view rest = line.substr(t1 + 1);
    bool omit = false;
    if (rest.starts_with("omit-title\t")) {
      omit = true;
      rest.remove_prefix(11);
    }
    out.push_back(StyleTemplate::parse(std::string(line.substr(0, t1)), rest, omit));
  }
  return out;
}

Rendered render_reference(const SourceRecord& rec, const StyleTemplate& style) {
  rec.validate();
  Renderer r(rec, style);
  r.render(style.segments);

  TokenSequence tokens = tokenize(r.out);
  std::vector<Label> labels(tokens.size(), Label::Oth);
  std::size_t sp = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    while (sp < r.spans.size() && r.spans[sp].end <= t.byte_offset) ++sp;
    if (sp < r.spans.size() && r.spans[sp].begin < t.end_offset()) {
      const Span& s = r.spans[sp];
      if (t.byte_offset < s.begin || t.end_offset() > s.end) {
        throw Error("style '" + style.name + "': field value does not sit on token boundaries in \"" + r.out + "\"");
      }
      labels[i] = s.label;
    }
  }

  Rendered out;
  out.sequence = LabeledSequence(std::move(tokens), std::move(labels));
  out.xml = annotate::emit_annotation(out.sequence);
  ParsedReference& truth = out.truth;
  if (r.first_author) truth.set(FieldType::Author, *r.first_author);
  if (r.source_label) truth.set(FieldType::Source, r.source_value);
  for (auto& [type, v] : r.values) truth.set(type, v);
  truth.source_string = r.out;
  return out;
}

std::string fields_json(const LabeledSequence& seq) {
  std::array<std::vector<std::string>, kLabelCount> runs;
  for (std::size_t i = 0; i < seq.size();) {
    std::size_t j = i;
    while (j + 1 < seq.size() && seq.labels[j + 1] == seq.labels[i]) ++j;
    if (seq.labels[i] != Label::Oth)
      runs[static_cast<std::size_t>(seq.labels[i])].emplace_back(seq.tokens.span_text(i, j));
    i = j + 1;
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Label l : kLabels) {
    if (!runs[static_cast<std::size_t>(l)].empty()) j[std::string(to_string(l))] = runs[static_cast<std::size_t>(l)];
  }
  return j.dump();
}

}  // namespace refparse::gen

#include "refparse/annotate.hpp"

#include <algorithm>

#include "refparse/error.hpp"
#include "refparse/text.hpp"

namespace refparse::annotate {

namespace {

struct ElementInfo {
  std::string_view name;
  std::optional<Label> label;  // nullopt: transparent (citation, author)
};

constexpr std::array<ElementInfo, 15> kElements = {{
    {"author", std::nullopt},
    {"fn", Label::AuFn},
    {"sn", Label::AuSn},
    {"title", Label::Title},
    {"journal", Label::Src},
    {"conference", Label::Src},
    {"year", Label::Year},
    {"volume", Label::Vol},
    {"issue", Label::Issue},
    {"fpage", Label::Fpage},
    {"lpage", Label::Lpage},
    {"doi", Label::Doi},
    {"url", Label::Url},
    {"arxiv", Label::Arxiv},
    {"organization", Label::Org},
}};

const ElementInfo* find_element(std::string_view name) {
  for (const auto& e : kElements) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string_view element_for(Label label) {
  switch (label) {
    case Label::AuFn: return "fn";
    case Label::AuSn: return "sn";
    case Label::Title: return "title";
    case Label::Src: return "journal";
    case Label::Doi: return "doi";
    case Label::Url: return "url";
    case Label::Arxiv: return "arxiv";
    case Label::Year: return "year";
    case Label::Vol: return "volume";
    case Label::Issue: return "issue";
    case Label::Fpage: return "fpage";
    case Label::Lpage: return "lpage";
    case Label::Org: return "organization";
    case Label::Oth: break;
  }
  return {};
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
         c == '.' || c == ':';
}

bool is_xml_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

struct Tag {
  enum class Kind { Start, End, Empty } kind;
  std::string_view name;
  std::size_t offset;  // of '<'
};

// Minimal pull scanner for the annotation vocabulary. Offsets are absolute
// byte positions in the scanned document.
class Scanner {
 public:
  explicit Scanner(std::string_view doc, std::size_t pos = 0) : doc_(doc), pos_(pos) {}

  std::size_t pos() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= doc_.size(); }
  bool at_tag() const noexcept { return !at_end() && doc_[pos_] == '<'; }

  // Skips comments, processing instructions and doctype declarations.
  void skip_misc() {
    while (at_tag()) {
      if (starts_with("<!--")) {
        const auto end = doc_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) throw AnnotationError("unterminated comment", pos_);
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        const auto end = doc_.find("?>", pos_ + 2);
        if (end == std::string_view::npos) throw AnnotationError("unterminated processing instruction", pos_);
        pos_ = end + 2;
      } else if (starts_with("<!DOCTYPE")) {
        const auto end = doc_.find('>', pos_);
        if (end == std::string_view::npos) throw AnnotationError("unterminated doctype", pos_);
        pos_ = end + 1;
      } else {
        return;
      }
    }
  }

  void skip_whitespace() {
    while (!at_end() && is_xml_space(doc_[pos_])) ++pos_;
  }

  Tag read_tag() {
    const std::size_t start = pos_;
    if (starts_with("<![CDATA[")) throw AnnotationError("CDATA sections are not supported", start);
    ++pos_;
    Tag tag{Tag::Kind::Start, {}, start};
    if (!at_end() && doc_[pos_] == '/') {
      tag.kind = Tag::Kind::End;
      ++pos_;
    }
    const std::size_t name_start = pos_;
    while (!at_end() && is_name_char(doc_[pos_])) ++pos_;
    if (pos_ == name_start) throw AnnotationError("malformed tag", start);
    tag.name = doc_.substr(name_start, pos_ - name_start);

    // attributes are accepted and ignored
    while (true) {
      skip_whitespace();
      if (at_end()) throw AnnotationError("unterminated tag", start);
      const char c = doc_[pos_];
      if (c == '>') {
        ++pos_;
        return tag;
      }
      if (c == '/' && tag.kind == Tag::Kind::Start) {
        if (pos_ + 1 >= doc_.size() || doc_[pos_ + 1] != '>') throw AnnotationError("malformed tag", start);
        pos_ += 2;
        tag.kind = Tag::Kind::Empty;
        return tag;
      }
      if (tag.kind == Tag::Kind::End) throw AnnotationError("malformed end tag", start);
      const std::size_t attr_start = pos_;
      while (!at_end() && is_name_char(doc_[pos_])) ++pos_;
      if (pos_ == attr_start) throw AnnotationError("malformed attribute", pos_);
      skip_whitespace();
      if (at_end() || doc_[pos_] != '=') throw AnnotationError("malformed attribute", pos_);
      ++pos_;
      skip_whitespace();
      if (at_end() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) throw AnnotationError("malformed attribute", pos_);
      const char quote = doc_[pos_];
      const auto end = doc_.find(quote, pos_ + 1);
      if (end == std::string_view::npos) throw AnnotationError("unterminated attribute value", pos_);
      pos_ = end + 1;
    }
  }

  // Appends decoded character data up to the next '<'.
  void read_text(std::string& out) {
    while (!at_end() && doc_[pos_] != '<') {
      const char c = doc_[pos_];
      if (c == '&') {
        decode_entity(out);
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
  }

 private:
  bool starts_with(std::string_view p) const { return doc_.substr(pos_, p.size()) == p; }

  void decode_entity(std::string& out) {
    const std::size_t start = pos_;
    const auto semi = doc_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) throw AnnotationError("malformed entity", start);
    const std::string_view name = doc_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (name == "amp") return out.push_back('&');
    if (name == "lt") return out.push_back('<');
    if (name == "gt") return out.push_back('>');
    if (name == "quot") return out.push_back('"');
    if (name == "apos") return out.push_back('\'');
    if (name.size() >= 2 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) throw AnnotationError("malformed character reference", start);
      unsigned long cp = 0;
      for (char d : digits) {
        int v = -1;
        if (d >= '0' && d <= '9') v = d - '0';
        else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
        else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
        if (v < 0) throw AnnotationError("malformed character reference", start);
        cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
        if (cp > 0x10FFFF) throw AnnotationError("character reference out of range", start);
      }
      if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) throw AnnotationError("invalid character reference", start);
      text::append_utf8(out, static_cast<char32_t>(cp));
      return;
    }
    throw AnnotationError("unknown entity '&" + std::string(name) + ";'", start);
  }

  std::string_view doc_;
  std::size_t pos_;
};

struct Boundary {
  std::size_t text_pos;    // position in the stripped text
  std::size_t xml_offset;  // offset of the tag in the document
};

// Parses the body of a <citation> element whose start tag has already been
// consumed; stops after the matching end tag.
LabeledSequence parse_citation_body(Scanner& sc, std::size_t root_offset) {
  std::string stripped;
  std::vector<Label> byte_labels;
  std::vector<Boundary> boundaries;

  struct Open {
    std::string_view name;
    std::size_t offset;
    Label label;
  };
  std::vector<Open> stack;
  auto current_label = [&] { return stack.empty() ? Label::Oth : stack.back().label; };

  while (true) {
    if (sc.at_end()) throw AnnotationError("unterminated <citation>", root_offset);
    if (!sc.at_tag()) {
      sc.read_text(stripped);
      byte_labels.resize(stripped.size(), current_label());
      continue;
    }
    sc.skip_misc();
    if (!sc.at_tag()) continue;
    const Tag tag = sc.read_tag();
    if (tag.kind == Tag::Kind::End) {
      if (stack.empty()) {
        if (tag.name != "citation") {
          throw AnnotationError("unexpected </" + std::string(tag.name) + ">", tag.offset);
        }
        break;
      }
      if (tag.name != stack.back().name) {
        throw AnnotationError("mismatched </" + std::string(tag.name) + ">, expected </" +
                                  std::string(stack.back().name) + ">",
                              tag.offset);
      }
      stack.pop_back();
      boundaries.push_back({stripped.size(), tag.offset});
      continue;
    }
    const ElementInfo* info = find_element(tag.name);
    if (!info) throw AnnotationError("unknown element <" + std::string(tag.name) + ">", tag.offset);
    boundaries.push_back({stripped.size(), tag.offset});
    if (tag.kind == Tag::Kind::Start) {
      stack.push_back({info->name, tag.offset, info->label.value_or(current_label())});
    }
  }

  TokenSequence tokens = tokenize(stripped);
  std::vector<Label> labels;
  labels.reserve(tokens.size());
  std::size_t b = 0;
  for (const Token& tok : tokens.tokens()) {
    while (b < boundaries.size() && boundaries[b].text_pos <= tok.byte_offset) ++b;
    if (b < boundaries.size() && boundaries[b].text_pos < tok.end_offset()) {
      throw AnnotationError("element boundary splits token '" + tok.text + "'", boundaries[b].xml_offset);
    }
    labels.push_back(byte_labels[tok.byte_offset]);
  }
  return LabeledSequence(std::move(tokens), std::move(labels));
}

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

bool is_author_label(Label l) { return l == Label::AuFn || l == Label::AuSn; }

}  // namespace

LabeledSequence parse_annotation(std::string_view xml) {
  Scanner sc(xml);
  sc.skip_whitespace();
  sc.skip_misc();
  sc.skip_whitespace();
  if (!sc.at_tag()) throw AnnotationError("expected <citation>", sc.pos());
  const Tag root = sc.read_tag();
  if (root.kind == Tag::Kind::End || root.name != "citation") {
    throw AnnotationError("root element must be <citation>", root.offset);
  }
  LabeledSequence seq;
  if (root.kind == Tag::Kind::Empty) {
    seq = LabeledSequence(tokenize(""), {});
  } else {
    seq = parse_citation_body(sc, root.offset);
  }
  sc.skip_whitespace();
  sc.skip_misc();
  sc.skip_whitespace();
  if (!sc.at_end()) throw AnnotationError("content after </citation>", sc.pos());
  return seq;
}

std::vector<AnnotationRecord> parse_corpus(std::string_view xml) {
  Scanner sc(xml);
  sc.skip_whitespace();
  sc.skip_misc();
  sc.skip_whitespace();
  if (!sc.at_tag()) throw AnnotationError("expected <citations>", sc.pos());
  const Tag root = sc.read_tag();
  if (root.kind == Tag::Kind::End || root.name != "citations") {
    throw AnnotationError("corpus root element must be <citations>", root.offset);
  }
  std::vector<AnnotationRecord> records;
  if (root.kind == Tag::Kind::Start) {
    while (true) {
      sc.skip_whitespace();
      sc.skip_misc();
      sc.skip_whitespace();
      if (sc.at_end()) throw AnnotationError("unterminated <citations>", root.offset);
      if (!sc.at_tag()) throw AnnotationError("text outside <citation>", sc.pos());
      const Tag tag = sc.read_tag();
      if (tag.kind == Tag::Kind::End) {
        if (tag.name != "citations") throw AnnotationError("unexpected </" + std::string(tag.name) + ">", tag.offset);
        break;
      }
      if (tag.name != "citation") {
        throw AnnotationError("expected <citation>, found <" + std::string(tag.name) + ">", tag.offset);
      }
      AnnotationRecord rec;
      if (tag.kind == Tag::Kind::Empty) {
        rec.derived = LabeledSequence(tokenize(""), {});
      } else {
        rec.derived = parse_citation_body(sc, tag.offset);
      }
      rec.xml = std::string(xml.substr(tag.offset, sc.pos() - tag.offset));
      records.push_back(std::move(rec));
    }
  }
  sc.skip_whitespace();
  sc.skip_misc();
  sc.skip_whitespace();
  if (!sc.at_end()) throw AnnotationError("content after </citations>", sc.pos());
  return records;
}

std::string emit_annotation(const LabeledSequence& seq) {
  const TokenSequence& toks = seq.tokens;
  struct Run {
    std::size_t first, last;
    Label label;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < toks.size();) {
    std::size_t j = i;
    while (j + 1 < toks.size() && seq.labels[j + 1] == seq.labels[i]) ++j;
    runs.push_back({i, j, seq.labels[i]});
    i = j + 1;
  }

  // An <author> holds one name run, optionally followed by the other name
  // part, either adjacent or after at most two punctuation tokens.
  auto other_part = [](Label a, Label b) {
    return is_author_label(a) && is_author_label(b) && a != b;
  };
  auto punctuation_only = [&](const Run& r) {
    if (r.label != Label::Oth || r.last - r.first >= 2) return false;
    for (std::size_t t = r.first; t <= r.last; ++t) {
      if (toks[t].kind != TokenKind::Other) return false;
    }
    return true;
  };

  std::string out = "<citation>";
  std::size_t author_end = runs.size();  // index of the run closing the open <author>
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Run& run = runs[r];
    escape_into(out, toks.gap(run.first));
    if (author_end == runs.size() && is_author_label(run.label)) {
      author_end = r;
      if (r + 1 < runs.size() && other_part(run.label, runs[r + 1].label)) {
        author_end = r + 1;
      } else if (r + 2 < runs.size() && punctuation_only(runs[r + 1]) && other_part(run.label, runs[r + 2].label)) {
        author_end = r + 2;
      }
      out += "<author>";
    }
    const std::string_view element = element_for(run.label);
    if (!element.empty()) {
      out += '<';
      out += element;
      out += '>';
    }
    escape_into(out, toks[run.first].text);
    for (std::size_t k = run.first + 1; k <= run.last; ++k) {
      escape_into(out, toks.gap(k));
      escape_into(out, toks[k].text);
    }
    if (!element.empty()) {
      out += "</";
      out += element;
      out += '>';
    }
    if (r == author_end) {
      out += "</author>";
      author_end = runs.size();
    }
  }
  escape_into(out, toks.gap(toks.size()));
  out += "</citation>";
  return out;
}

std::string emit_corpus(std::span<const std::string> citation_xml) {
  std::string out = "<citations>\n";
  for (const auto& c : citation_xml) {
    out += c;
    out += '\n';
  }
  out += "</citations>\n";
  return out;
}

}  // namespace refparse::annotate

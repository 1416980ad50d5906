#include "refparse/tokenize.hpp"

#include "refparse/text.hpp"

namespace refparse {

std::string_view to_string(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Alpha: return "ALPHA";
    case TokenKind::Digit: return "DIGIT";
    case TokenKind::Other: return "OTHER";
  }
  return "OTHER";
}

namespace {

enum class CharClass { Letter, Digit, Space, Other };

CharClass classify(char32_t cp) {
  if (text::is_ascii_digit(cp)) return CharClass::Digit;
  if (text::is_letter(cp)) return CharClass::Letter;
  if (text::is_space(cp)) return CharClass::Space;
  return CharClass::Other;
}

}  // namespace

TokenSequence tokenize(std::string_view s) {
  TokenSequence seq;
  seq.original_.assign(s);
  seq.gaps_.clear();

  std::string gap;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const text::Decoded d = text::decode(s, pos);
    const CharClass cls = classify(d.cp);
    if (cls == CharClass::Space) {
      gap.append(s.substr(pos, d.len));
      pos += d.len;
      continue;
    }

    const std::size_t start = pos;
    pos += d.len;
    TokenKind kind = TokenKind::Other;
    if (cls == CharClass::Letter || cls == CharClass::Digit) {
      kind = cls == CharClass::Letter ? TokenKind::Alpha : TokenKind::Digit;
      while (pos < s.size()) {
        const text::Decoded next = text::decode(s, pos);
        if (classify(next.cp) != cls) break;
        pos += next.len;
      }
    }

    seq.tokens_.push_back(Token{std::string(s.substr(start, pos - start)), kind, !gap.empty(), start});
    seq.gaps_.push_back(std::move(gap));
    gap.clear();
  }
  seq.gaps_.push_back(std::move(gap));
  return seq;
}

std::string detokenize(const TokenSequence& seq) {
  std::string out;
  out.reserve(seq.original().size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out += seq.gap(i);
    out += seq[i].text;
  }
  out += seq.gap(seq.size());
  return out;
}

std::string_view TokenSequence::span_text(std::size_t first, std::size_t last) const {
  const std::size_t b = tokens_.at(first).byte_offset;
  const std::size_t e = tokens_.at(last).end_offset();
  return std::string_view(original_).substr(b, e - b);
}

}  // namespace refparse

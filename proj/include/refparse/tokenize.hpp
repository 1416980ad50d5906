#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refparse {

enum class TokenKind : std::uint8_t { Alpha, Digit, Other };

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Other;
  bool preceded_by_space = false;
  std::size_t byte_offset = 0;

  std::size_t end_offset() const noexcept { return byte_offset + text.size(); }
  bool operator==(const Token&) const = default;
};

/// Lossless token view of a reference string. Letter runs, ASCII digit runs
/// and single other characters become tokens; whitespace is kept verbatim in
/// a gap table (gap(i) precedes token i, gap(size()) trails the last token).
class TokenSequence {
 public:
  TokenSequence() : gaps_(1) {}

  const std::string& original() const noexcept { return original_; }
  std::span<const Token> tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  std::string_view gap(std::size_t i) const { return gaps_.at(i); }

  /// Original text covering tokens [first, last], whitespace included.
  std::string_view span_text(std::size_t first, std::size_t last) const;

  bool operator==(const TokenSequence&) const = default;

 private:
  friend TokenSequence tokenize(std::string_view s);

  std::string original_;
  std::vector<Token> tokens_;
  std::vector<std::string> gaps_;
};

TokenSequence tokenize(std::string_view s);

/// Rebuilds the string from tokens and the gap table.
std::string detokenize(const TokenSequence& seq);

}  // namespace refparse

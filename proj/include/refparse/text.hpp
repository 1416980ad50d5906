#pragma once

// UTF-8 helpers shared by the tokenizer, the normalizer and the generator.
// Character classes come from ICU; invalid UTF-8 bytes decode as single
// replacement units so that callers can stay lossless.

#include <cstddef>
#include <string>
#include <string_view>

namespace refparse::text {

struct Decoded {
  char32_t cp;      // U+FFFD for an invalid byte
  std::size_t len;  // bytes consumed, always >= 1
};

Decoded decode(std::string_view s, std::size_t pos) noexcept;
void append_utf8(std::string& out, char32_t cp);

bool is_letter(char32_t cp) noexcept;
bool is_space(char32_t cp) noexcept;
inline bool is_ascii_digit(char32_t cp) noexcept { return cp >= U'0' && cp <= U'9'; }
bool is_hyphen_like(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_lower(char32_t cp) noexcept;

std::string to_lower(std::string_view s);
char32_t to_upper(char32_t cp) noexcept;

/// First code point of `s`, uppercased, as UTF-8. Empty for empty input.
std::string upper_initial(std::string_view s);

std::size_t code_point_count(std::string_view s) noexcept;

/// Leading and trailing Unicode whitespace removed.
std::string_view trim(std::string_view s) noexcept;

}  // namespace refparse::text

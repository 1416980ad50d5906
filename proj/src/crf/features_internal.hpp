#pragma once

#include <string>
#include <vector>

#include "refparse/tokenize.hpp"

namespace refparse::crf::detail {

// Per-token template values, computed once per sequence and reused by every
// window position that looks at the token.
struct TokenTemplates {
  std::string surface;
  std::string kind;
  std::string shape;
  std::vector<std::string> lexicons;
  std::string space;
};

TokenTemplates token_templates(const Token& tok);
std::vector<TokenTemplates> sequence_templates(const TokenSequence& seq);

/// Appends the feature names of position i (unsorted, may repeat).
void position_features(const std::vector<TokenTemplates>& templates, std::size_t i, std::vector<std::string>& out);

}  // namespace refparse::crf::detail

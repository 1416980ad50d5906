#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/model.hpp"

namespace refparse {

/// One compact JSON object, keys in schema order, absent fields omitted.
std::string to_json_line(const ParsedReference& ref);

/// Reads schema keys from a JSON object line; unknown keys are ignored.
/// Throws Error on malformed JSON or non-string schema values.
ParsedReference parse_json_line(std::string_view line);

std::vector<ParsedReference> read_jsonl(std::istream& in);
void write_jsonl(std::ostream& out, const std::vector<ParsedReference>& refs);

/// Reads one reference string per line (trailing '\r' stripped).
std::vector<std::string> read_lines(std::istream& in);

}  // namespace refparse

#include "refparse/jsonl.hpp"

#include <json.hpp>

#include "refparse/error.hpp"

namespace refparse {

std::string to_json_line(const ParsedReference& ref) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& f : ref.fields()) obj[std::string(to_string(f.type))] = f.value;
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ParsedReference parse_json_line(std::string_view line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON line: ") + e.what());
  }
  if (!obj.is_object()) throw Error("JSON line is not an object");

  ParsedReference ref;
  for (FieldType type : kFieldTypes) {
    const auto it = obj.find(std::string(to_string(type)));
    if (it == obj.end() || it->is_null()) continue;
    if (!it->is_string()) throw Error("field '" + std::string(to_string(type)) + "' is not a string");
    ref.set(type, it->get<std::string>());
  }
  return ref;
}

std::vector<ParsedReference> read_jsonl(std::istream& in) {
  std::vector<ParsedReference> refs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      refs.push_back(parse_json_line(line));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return refs;
}

void write_jsonl(std::ostream& out, const std::vector<ParsedReference>& refs) {
  for (const auto& r : refs) out << to_json_line(r) << '\n';
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace refparse

#include <algorithm>

#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"

namespace refparse::gen {

namespace {

struct StyleSource {
  const char* name;
  bool omit_title;
  const char* text;
};

// acm follows the layout of the running example; acm and apa are the
// layouts the default rule set was written against.
constexpr StyleSource kBuiltins[] = {
    {"acm", false,
     R"({authors:"Given Surname" last=" and "}. {title}. In {source}[, {organization}], {year})"
     R"([, vol. {volume}][, no. {issue}][, pp. {fpage}-{lpage}|, p. {fpage}][, doi: {doi}|, {url}|, arXiv:{arxiv}].)"},
    {"apa", false,
     R"({authors:"Surname, F." last=", & "} ({year}). {title}. {source}[, {volume}[({issue})]])"
     R"([, {fpage}-{lpage}|, {fpage}].[ https://doi.org/{doi}| {url}| arXiv:{arxiv}])"},
    {"numbers-only", true, R"({authors:"Surname, F."}. {source}[ {volume}][, {fpage}-{lpage}|, {fpage}] ({year}).)"},
    {"chem-acs", true, R"({authors:"Surname, F." sep="; "} {source:abbrev}. {year}[, {volume}][, {fpage}].)"},
    {"vancouver", false,
     R"({authors:"Surname F" max="6" etal=", et al"}. {title}. {source:abbrev-nodot}. {year})"
     R"([;{volume}[({issue})]][:{fpage}-{lpage:short}|:{fpage}].)"},
    {"ieee", false,
     R"({authors:"F. Surname" last=", and "}, "{title}," {source:abbrev}[, vol. {volume}][, no. {issue}])"
     R"([, pp. {fpage}-{lpage}|, p. {fpage}], {year}[, doi: {doi}].)"},
    {"harvard", false,
     R"({authors:"Surname, Given" last=" and "} {year}, '{title}', {source}[, vol. {volume}][, no. {issue}])"
     R"([, pp. {fpage}-{lpage}].)"},
    {"rsc", true, R"({authors:"F. Surname" last=" and "}, {source:abbrev}, {year}[, {volume}][, {fpage}].)"},
};

constexpr const char* kDefaultNames[] = {"acm", "apa", "numbers-only", "chem-acs", "vancouver"};

}  // namespace

const std::vector<StyleTemplate>& builtin_styles() {
  static const std::vector<StyleTemplate> styles = [] {
    std::vector<StyleTemplate> v;
    for (const StyleSource& s : kBuiltins) v.push_back(StyleTemplate::parse(s.name, s.text, s.omit_title));
    return v;
  }();
  return styles;
}

const StyleTemplate& builtin_style(std::string_view name) {
  const auto& styles = builtin_styles();
  const auto it = std::find_if(styles.begin(), styles.end(), [&](const StyleTemplate& s) { return s.name == name; });
  if (it == styles.end()) throw Error("unknown style '" + std::string(name) + "'");
  return *it;
}

std::vector<StyleTemplate> default_styles() {
  std::vector<StyleTemplate> out;
  for (const char* n : kDefaultNames) out.push_back(builtin_style(n));
  return out;
}

}  // namespace refparse::gen

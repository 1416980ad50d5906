#pragma once

#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/model.hpp"

namespace refparse::rules {

/// How a rule turns a regex match into a field value.
enum class CapturePolicy {
  Group,        // capture group `group`, verbatim
  Year,         // standalone 19xx/20xx outside a numeric range
  PageRange,    // groups 1-2 are A and B; emits A when A < B and the range stands alone
  Identifier,   // DOI/URL/arXiv; trailing punctuation trimmed, masked from numeric rules
  AuthorSurnameFirst,  // group 1 surname, group 2 initial ("Surname, F.")
  AuthorGivenFirst,    // group 1 initial, group 2 surname ("F. Surname")
  SourceRun,    // longest capitalized-word run between the author block and the year
};

struct Rule {
  FieldType field;
  std::string pattern;
  CapturePolicy policy = CapturePolicy::Group;
  int group = 1;
  std::regex regex;
};

/// Ordered rules; for each field type the first rule that yields a value wins.
class RuleSet {
 public:
  /// The built-in archetype rules.
  static RuleSet defaults();

  /// One rule per line: `<field>\t<pattern>[\t<policy>[\t<group>]]`.
  /// Blank lines and lines starting with '#' are skipped. Policy names:
  /// group, year, page-range, identifier, author-sf, author-fs, source-run.
  /// Throws Error on unknown fields/policies or patterns that do not compile.
  static RuleSet parse(std::string_view text);

  void add(FieldType field, std::string pattern, CapturePolicy policy = CapturePolicy::Group, int group = 1);
  std::span<const Rule> rules() const noexcept { return rules_; }

 private:
  std::vector<Rule> rules_;
};

/// Applies the rules to one reference string. Fields no rule finds are absent.
ParsedReference rule_parse(std::string_view s, const RuleSet& rules);
inline ParsedReference rule_parse(std::string_view s) { return rule_parse(s, RuleSet::defaults()); }

std::vector<ParsedReference> rule_parse_all(std::span<const std::string> strings, const RuleSet& rules);

}  // namespace refparse::rules

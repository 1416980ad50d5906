#include <doctest.h>

#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/rules.hpp"
#include "support.hpp"

using namespace refparse;
using namespace refparse::rules;

TEST_CASE("example reference") {
  const ParsedReference r = rule_parse(fixtures::kFig1);
  CHECK(r.get(FieldType::Year) == "2015");
  CHECK(r.get(FieldType::Volume) == "18");
  CHECK(r.get(FieldType::Issue) == "4");
  CHECK(r.get(FieldType::Page) == "317");
  CHECK(r.get(FieldType::Source) == "10.1007/s10032-015-0249-8");
}

TEST_CASE("page ranges") {
  CHECK(rule_parse("pp. 317-335").get(FieldType::Page) == "317");
  CHECK(rule_parse("pages 12\xE2\x80\x93" "19").get(FieldType::Page) == "12");
  CHECK(rule_parse("Nature 5, 101\xE2\x80\x94" "109 (1999).").get(FieldType::Page) == "101");
  CHECK_FALSE(rule_parse("Nature 5, 109-101 (1999).").has(FieldType::Page));
  CHECK_FALSE(rule_parse("Nature 5, 1234567-1234568.").has(FieldType::Page));
}

TEST_CASE("nothing to find") {
  const ParsedReference r = rule_parse("no digits here");
  CHECK_FALSE(r.has(FieldType::Year));
  CHECK_FALSE(r.has(FieldType::Page));
  CHECK_FALSE(r.has(FieldType::Volume));
}

TEST_CASE("year must stand alone outside numeric ranges") {
  CHECK(rule_parse("Report 1999-2005, revised 2007").get(FieldType::Year) == "2007");
  CHECK_FALSE(rule_parse("id 120150").has(FieldType::Year));
  CHECK(rule_parse("Smith J (2001) Nature").get(FieldType::Year) == "2001");
  CHECK_FALSE(rule_parse("in 1850").has(FieldType::Year));
}

TEST_CASE("volume and issue forms") {
  const ParsedReference a = rule_parse("J. Chem. 2001, 12(3), 45-50.");
  CHECK(a.get(FieldType::Volume) == "12");
  CHECK(a.get(FieldType::Issue) == "3");
  const ParsedReference b = rule_parse("Foo, volume 7, issue 2");
  CHECK(b.get(FieldType::Volume) == "7");
  CHECK(b.get(FieldType::Issue) == "2");
}

TEST_CASE("identifiers") {
  CHECK(rule_parse("See https://example.org/x.pdf.").get(FieldType::Source) == "https://example.org/x.pdf");
  CHECK(rule_parse("Preprint arXiv:1501.00001, 2015").get(FieldType::Source) == "1501.00001");
  // Digits inside an identifier are not numbers of the reference.
  const ParsedReference r = rule_parse("doi: 10.1234/5678-9012");
  CHECK_FALSE(r.has(FieldType::Page));
  CHECK_FALSE(r.has(FieldType::Volume));
}

TEST_CASE("capitalized run as source") {
  const ParsedReference r = rule_parse("Smith, J. A study of things. In Journal of Applied Things, 2001, 5.");
  CHECK(r.get(FieldType::Source) == "Journal of Applied Things");
  CHECK(r.get(FieldType::Author) == "Smith, J");
}

TEST_CASE("author patterns") {
  CHECK(rule_parse("Tkaczyk, D., Szostek, P. Title. 2015").get(FieldType::Author) == "Tkaczyk, D");
  CHECK(rule_parse("D. Tkaczyk and P. Szostek. Title. 2015").get(FieldType::Author) == "Tkaczyk, D");
  CHECK(rule_parse("P. J. Dendek. Title. 2015").get(FieldType::Author) == "Dendek, P");
  CHECK_FALSE(rule_parse("Dominika Tkaczyk. Title. 2015").has(FieldType::Author));
}

TEST_CASE("values are substrings and parsing is deterministic on generated references") {
  const auto corpus = gen::generate_corpus(400, gen::builtin_styles(), gen::NoiseConfig{0.02}, 17);
  std::vector<std::string> strings;
  for (const auto& g : corpus) strings.push_back(g.noisy.tokens.original());
  const auto all = rule_parse_all(strings, RuleSet::defaults());
  REQUIRE(all.size() == strings.size());
  for (std::size_t i = 0; i < strings.size(); ++i) {
    CHECK(all[i] == rule_parse(strings[i]));
    for (const MetadataField& f : all[i].fields()) {
      CHECK_FALSE(f.value.empty());
      // The author value is reformatted ("Surname, I"); its surname still
      // comes from the string.
      const std::string piece = f.type == FieldType::Author ? f.value.substr(0, f.value.find(',')) : f.value;
      CHECK(strings[i].find(piece) != std::string::npos);
    }
  }
}

TEST_CASE("blank lines give empty references in batch mode") {
  const std::vector<std::string> in = {"", "Smith J (2001)"};
  const auto out = rule_parse_all(in, RuleSet::defaults());
  CHECK(out[0].empty());
  CHECK(out[1].get(FieldType::Year) == "2001");
}

TEST_CASE("rule files") {
  const RuleSet rs = RuleSet::parse(
      "# custom\n"
      "\n"
      "year\t\\[(\\d{4})\\]\n"
      "volume\tBd\\.\\s*(\\d+)\n"
      "page\tS\\. (\\d+)\\s*-\\s*(\\d+)\tpage-range\n"
      "issue\tH\\. (\\d+)/(\\d+)\tgroup\t2\n");
  REQUIRE(rs.rules().size() == 4);
  const ParsedReference r = rule_parse("Meier [1998] Bd. 4, H. 1/2, S. 10 - 20", rs);
  CHECK(r.get(FieldType::Year) == "1998");
  CHECK(r.get(FieldType::Volume) == "4");
  CHECK(r.get(FieldType::Issue) == "2");
  CHECK(r.get(FieldType::Page) == "10");
  CHECK_FALSE(r.has(FieldType::Source));

  CHECK_THROWS_AS(RuleSet::parse("colour\tx"), Error);
  CHECK_THROWS_AS(RuleSet::parse("year\t(unclosed"), Error);
  CHECK_THROWS_AS(RuleSet::parse("year\t(\\d+)\tbogus"), Error);
  CHECK_THROWS_AS(RuleSet::parse("year\t(\\d+)\tgroup\t3"), Error);
  CHECK_THROWS_AS(RuleSet::parse("year"), Error);
}

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/annotate.hpp"
#include "refparse/model.hpp"

namespace refparse::gen {

struct Author {
  std::string given;    // space-separated given names, may be empty
  std::string surname;  // may contain spaces ("van der Berg")
};

struct SourceRecord {
  std::vector<Author> authors;
  std::string title;
  std::string source;
  std::string source_abbrev;  // ISO4-like, without the final period; empty = same as source
  int year = 2000;
  std::optional<int> volume;
  std::optional<int> issue;
  std::optional<int> fpage;
  std::optional<int> lpage;
  std::optional<std::string> doi;
  std::optional<std::string> url;
  std::optional<std::string> arxiv;
  std::optional<std::string> organization;

  /// Throws Error unless year is in [1900, 2099], fpage <= lpage, and there
  /// is at least one author with a surname.
  void validate() const;
};

/// The record of the two-column example used throughout the docs.
SourceRecord example_record();

// ---------------------------------------------------------------------------
// Style templates.
//
// Template text is literal except for:
//   {field} / {field:variant}   field placeholder
//   {authors:"FORMAT" opt="..."} author list; FORMAT uses Surname, Given, F. (initials
//                               with periods) and F (initials without periods);
//                               options sep, last, max, etal
//   [ a | b ]                   first alternative whose fields are all present;
//                               renders nothing if none is
//   \x                          literal x
// Fields: authors title source year volume issue fpage lpage doi url arxiv
// organization. Variants: source:abbrev, source:abbrev-nodot, lpage:short
// (digits shared with fpage dropped, "317-35").
// A literal starting with '.' loses that period after a value ending in
// '.', '?' or '!'.

struct Segment;
using Sequence = std::vector<Segment>;

struct AuthorFormat {
  std::string pattern = "Surname, F.";
  std::string sep = ", ";
  std::optional<std::string> last;  // separator before the final author
  std::size_t max = 0;              // 0 = unlimited
  std::string etal = " et al.";
};

struct Segment {
  enum class Kind { Literal, Field, Authors, Group } kind = Kind::Literal;
  std::string text;     // literal text or field name
  std::string variant;  // field variant
  AuthorFormat authors;
  std::vector<Sequence> alternatives;
};

struct StyleTemplate {
  std::string name;
  Sequence segments;
  bool omit_title = false;

  /// Throws Error on syntax errors and unknown fields or variants.
  static StyleTemplate parse(std::string name, std::string_view text, bool omit_title = false);
};

/// Built-in styles: acm, apa, numbers-only, chem-acs, vancouver, ieee,
/// harvard, rsc. acm and apa are the styles the default rule set targets.
const std::vector<StyleTemplate>& builtin_styles();

/// The five styles used by default experiments.
std::vector<StyleTemplate> default_styles();

/// Looks up a built-in style; throws Error for unknown names.
const StyleTemplate& builtin_style(std::string_view name);

/// One style per line: `<name>\t<template>` or `<name>\tomit-title\t<template>`.
std::vector<StyleTemplate> parse_style_file(std::string_view text);

struct Rendered {
  LabeledSequence sequence;
  std::string xml;
  ParsedReference truth;  // client-schema ground truth, computed from the record
};

/// Renders and labels a record. Throws Error when the style needs a field
/// the record lacks, or when a field value does not sit on token boundaries.
Rendered render_reference(const SourceRecord& rec, const StyleTemplate& style);

/// Every labeled run of a sequence as one JSON object line: label name ->
/// array of run texts, labels in enum order, OTH left out. Written for the
/// clean rendering this is the full field set of the reference.
std::string fields_json(const LabeledSequence& seq);

// ---------------------------------------------------------------------------
// OCR-style noise.

enum class NoiseOp : std::uint8_t { Substitute, DeleteSpace, InsertSpace, Transpose };

struct NoiseConfig {
  double p = 0.0;
  std::array<double, 4> mix = {0.4, 0.2, 0.2, 0.2};  // indexed by NoiseOp
  std::uint64_t seed = 0;

  /// Throws Error unless p and the mix entries are in [0, 1] and the mix sums to 1.
  void validate() const;
};

struct Corruption {
  std::string text;
  std::size_t operations = 0;
};

/// Each code point is selected with probability p; a selected code point
/// receives exactly one operation drawn from the mix. Operations that do
/// not apply at that position (no confusion entry, no space, last
/// character) fall back to inserting a space. Never returns an empty string
/// for non-empty input.
Corruption corrupt_counted(std::string_view s, const NoiseConfig& cfg);
inline std::string corrupt(std::string_view s, const NoiseConfig& cfg) { return corrupt_counted(s, cfg).text; }

/// Corrupts a labeled sequence and re-projects the labels onto the new
/// tokens by majority vote of their characters' original labels.
struct NoisyLabeled {
  LabeledSequence sequence;
  std::size_t operations = 0;
};
NoisyLabeled corrupt_labeled(const LabeledSequence& seq, const NoiseConfig& cfg);

// ---------------------------------------------------------------------------
// Corpus generation.

/// Random record with fields drawn from built-in name, venue and title
/// word lists.
SourceRecord random_record(std::mt19937_64& rng);

struct GeneratedReference {
  std::size_t index = 0;
  std::string style;
  SourceRecord record;
  LabeledSequence clean;  // before noise
  LabeledSequence noisy;  // after noise, labels re-projected
  std::string xml;        // annotation of `noisy`
  ParsedReference truth;
  std::size_t noise_operations = 0;
  bool flagged = false;   // noisy labels no longer assemble to the truth
};

/// Seeded generator: record i uses style i mod |styles| and its own seed
/// derived from (seed, i). Throws Error when styles is empty.
std::vector<GeneratedReference> generate_corpus(std::size_t n, const std::vector<StyleTemplate>& styles,
                                                const NoiseConfig& noise, std::uint64_t seed);

/// Writes <prefix>.xml (annotation corpus), <prefix>.jsonl (truth),
/// <prefix>.txt (reference strings), <prefix>.fields.jsonl (fields_json of the clean rendering)
/// and <prefix>.meta.tsv.
void write_corpus(const std::vector<GeneratedReference>& corpus, const std::string& prefix);

/// Derived per-item seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace refparse::gen

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/model.hpp"

namespace refparse::annotate {

// Element vocabulary of the training format:
//   citation (record root), citations (corpus root), author (grouping only),
//   fn, sn, title, journal, conference, year, volume, issue, fpage, lpage,
//   doi, url, arxiv, organization.
// Text outside every labeled element is OTH; journal and conference both
// label SRC.

struct AnnotationRecord {
  std::string xml;
  LabeledSequence derived;
};

/// Parses one <citation> element. Throws AnnotationError (with a byte offset
/// into `xml`) on malformed XML, unknown elements, or a tag that splits a
/// token.
LabeledSequence parse_annotation(std::string_view xml);

/// Canonical attribute-free XML; parse_annotation inverts it exactly.
std::string emit_annotation(const LabeledSequence& seq);

/// Parses a <citations> corpus into its records, in document order.
std::vector<AnnotationRecord> parse_corpus(std::string_view xml);

/// Wraps already-emitted <citation> elements in a <citations> root, one per line.
std::string emit_corpus(std::span<const std::string> citation_xml);

// ---------------------------------------------------------------------------
// Ground-truth matching: turns (reference string, curated field values) into
// a labeled sequence, or reports which required values could not be found.

struct TruthAuthor {
  std::string given;    // "Piotr Jan", "P. J." or "" when unknown
  std::string surname;  // "Dendek"
};

struct TruthField {
  Label label = Label::Oth;  // any label except AuFn, AuSn and Oth
  std::string value;
  bool required = true;
};

struct GroundTruth {
  std::vector<TruthAuthor> authors;  // the first author is required, the rest optional
  std::vector<TruthField> fields;
};

/// Ground truth from an output-schema record: "Surname, I" authors, the
/// source labeled by its shape (DOI, URL, arXiv id or name).
GroundTruth truth_from_parsed(const ParsedReference& ref);

struct MatchResult {
  std::optional<LabeledSequence> sequence;  // set on success
  std::vector<std::string> unmatched;       // required values without an occurrence

  bool ok() const noexcept { return sequence.has_value(); }
};

/// Finds token-aligned occurrences of every truth value in `s` (normalized
/// comparison, then edit distance <= 1 per 10 characters), assigning the
/// longest values first without reusing tokens. Unmatched tokens are OTH.
/// Fails when a required value has no acceptable occurrence.
MatchResult match_fields_to_string(std::string_view s, const GroundTruth& truth);

}  // namespace refparse::annotate

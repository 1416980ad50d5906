#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/model.hpp"

namespace refparse::eval {

/// Lowercase, hyphen-like characters mapped to '-', the five XML entities
/// decoded, whitespace runs collapsed to one space, trimmed.
std::string normalize_value(std::string_view v);

enum class Verdict : std::uint8_t { Correct, Incorrect };

struct Judgment {
  std::size_t reference_id = 0;
  MetadataField field;
  Verdict verdict = Verdict::Incorrect;
};

/// One verdict per extracted field. A field is correct when an unconsumed
/// truth field has the same type and the same normalized value; each truth
/// field is consumed at most once.
std::vector<Judgment> judge(std::span<const MetadataField> extracted, std::span<const MetadataField> truth,
                            std::size_t reference_id = 0);
std::vector<Judgment> judge(const ParsedReference& extracted, const ParsedReference& truth,
                            std::size_t reference_id = 0);

struct Counts {
  std::size_t correct = 0;
  std::size_t extracted = 0;
  std::size_t expected = 0;

  Counts& operator+=(const Counts& o) {
    correct += o.correct, extracted += o.extracted, expected += o.expected;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean, 0 when p + r == 0.
double f1_score(double precision, double recall) noexcept;
Scores scores(const Counts& c) noexcept;

using ExpectedCounts = std::array<std::size_t, kFieldTypeCount>;

ExpectedCounts expected_counts(std::span<const ParsedReference> truths);

struct MetricsReport {
  std::array<Counts, kFieldTypeCount> per_field{};
  Counts overall;  // pooled over field types

  Scores field_scores(FieldType t) const noexcept { return scores(per_field[static_cast<std::size_t>(t)]); }
  Scores micro() const noexcept { return scores(overall); }
  /// Mean of per-type scores over types that were expected or extracted.
  Scores macro() const noexcept;
};

MetricsReport compute_metrics(std::span<const Judgment> judgments, const ExpectedCounts& expected);

/// Judges aligned prediction/truth pairs and aggregates them.
/// Throws Error when the lists differ in length.
MetricsReport evaluate_corpus(std::span<const ParsedReference> predicted, std::span<const ParsedReference> truths);

struct RenderedReport {
  std::string text;  // two-decimal table, micro overall row
  std::string tsv;   // full precision, overall_micro and overall_macro rows
};

RenderedReport render_report(const MetricsReport& report);

}  // namespace refparse::eval

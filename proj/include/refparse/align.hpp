#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/model.hpp"

namespace refparse::align {

/// Pairs scoring below this are never aligned.
inline constexpr double kDefaultThreshold = 0.3;

/// Field values of one ground-truth record.
using TruthValues = std::vector<std::string>;

TruthValues truth_values(const ParsedReference& ref);

/// Every string value of a JSON object line (string arrays flattened), in
/// key order, so that records richer than the output schema can be used.
/// Throws Error on malformed JSON.
TruthValues truth_values_from_json(std::string_view line);

/// Letter and digit tokens, each normalized like a field value, sorted.
/// Punctuation tokens do not take part in similarity.
std::vector<std::string> token_multiset(std::string_view s);
std::vector<std::string> token_multiset(std::span<const std::string> values);

/// Multiset Jaccard: sum of min counts over sum of max counts; 0 when both are empty.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

double similarity(std::string_view s, const TruthValues& truth);

struct AlignedPair {
  std::size_t string_index = 0;
  std::size_t truth_index = 0;
  double similarity = 0.0;
  bool operator==(const AlignedPair&) const = default;
};

struct AlignmentResult {
  std::vector<AlignedPair> pairs;  // strictly increasing in both indices
  std::vector<std::size_t> unmatched_strings;
  std::vector<std::size_t> unmatched_truths;

  double total_similarity() const noexcept;
};

/// Maximum-total monotone alignment over a similarity matrix (rows =
/// strings, columns = truths). Cells below `threshold` or equal to 0 cannot
/// be paired. Ties resolve towards pairing earlier indices.
AlignmentResult align_matrix(const std::vector<std::vector<double>>& sim, double threshold = kDefaultThreshold);

AlignmentResult align_lists(std::span<const std::string> strings, std::span<const TruthValues> truths,
                            double threshold = kDefaultThreshold);

}  // namespace refparse::align

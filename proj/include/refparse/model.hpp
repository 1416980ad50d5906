#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refparse/tokenize.hpp"

namespace refparse {

/// Field types of the output schema, in report column order.
enum class FieldType : std::uint8_t { Author, Source, Year, Volume, Issue, Page, Organization };

inline constexpr std::size_t kFieldTypeCount = 7;
inline constexpr std::array<FieldType, kFieldTypeCount> kFieldTypes = {
    FieldType::Author, FieldType::Source, FieldType::Year,        FieldType::Volume,
    FieldType::Issue,  FieldType::Page,   FieldType::Organization};

std::string_view to_string(FieldType type) noexcept;
std::optional<FieldType> parse_field_type(std::string_view name) noexcept;

/// Token labels. AuFn/AuSn split an author into given names and surname;
/// Oth marks tokens outside every field.
enum class Label : std::uint8_t {
  AuFn, AuSn, Title, Src, Doi, Url, Arxiv, Year, Vol, Issue, Fpage, Lpage, Org, Oth
};

inline constexpr std::size_t kLabelCount = 14;
inline constexpr std::array<Label, kLabelCount> kLabels = {
    Label::AuFn, Label::AuSn, Label::Title, Label::Src,   Label::Doi,   Label::Url,   Label::Arxiv,
    Label::Year, Label::Vol,  Label::Issue, Label::Fpage, Label::Lpage, Label::Org,   Label::Oth};

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;

std::optional<FieldType> map_label(Label label) noexcept;

struct MetadataField {
  FieldType type;
  std::string value;
  bool operator==(const MetadataField&) const = default;
};

/// Single-valued record in the output schema. Fields are kept in
/// FieldType order; setting a type that is already present replaces it.
class ParsedReference {
 public:
  std::optional<std::string_view> get(FieldType type) const noexcept;
  bool has(FieldType type) const noexcept { return get(type).has_value(); }
  void set(FieldType type, std::string value);
  void erase(FieldType type);

  std::span<const MetadataField> fields() const noexcept { return fields_; }
  bool empty() const noexcept { return fields_.empty(); }
  std::size_t size() const noexcept { return fields_.size(); }

  std::optional<std::string> source_string;

  bool operator==(const ParsedReference& other) const { return fields_ == other.fields_; }

 private:
  std::vector<MetadataField> fields_;
};

/// Token sequence plus one label per token.
struct LabeledSequence {
  TokenSequence tokens;
  std::vector<Label> labels;

  LabeledSequence() = default;
  /// Throws Error when the lengths differ.
  LabeledSequence(TokenSequence t, std::vector<Label> l);

  std::size_t size() const noexcept { return labels.size(); }
  bool operator==(const LabeledSequence&) const = default;
};

struct FirstAuthor {
  std::string text;
  bool surname_missing = false;
};

/// "Surname, I" from name parts; surname only without given names; given
/// names verbatim (flagged) without a surname. Throws Error if both are empty.
FirstAuthor format_first_author(std::span<const std::string> given_tokens,
                                std::span<const std::string> surname_tokens);

/// Concatenates runs of equal labels and maps them onto the schema.
ParsedReference assemble_fields(const LabeledSequence& seq);

}  // namespace refparse

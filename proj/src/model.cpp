#include "refparse/model.hpp"

#include <algorithm>

#include "refparse/error.hpp"
#include "refparse/text.hpp"

namespace refparse {

namespace {

constexpr std::array<std::string_view, kFieldTypeCount> kFieldNames = {
    "author", "source", "year", "volume", "issue", "page", "organization"};

constexpr std::array<std::string_view, kLabelCount> kLabelNames = {
    "AU_FN", "AU_SN", "TITLE", "SRC",   "DOI",   "URL", "ARXIV",
    "YEAR",  "VOL",   "ISSUE", "FPAGE", "LPAGE", "ORG", "OTH"};

bool is_author_label(Label l) { return l == Label::AuFn || l == Label::AuSn; }

struct Run {
  Label label;
  std::size_t first;
  std::size_t last;
};

std::vector<Run> label_runs(const LabeledSequence& seq) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!runs.empty() && runs.back().label == seq.labels[i]) {
      runs.back().last = i;
    } else {
      runs.push_back({seq.labels[i], i, i});
    }
  }
  return runs;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (std::size_t i = 0; i < s.size();) {
    const text::Decoded d = text::decode(s, i);
    if (text::is_space(d.cp)) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.append(s.substr(i, d.len));
    }
    i += d.len;
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

// At most this many punctuation tokens may sit between the given-name run and
// the surname run of one author ("Tkaczyk, D.").
constexpr std::size_t kMaxNamePunctuation = 2;

// Index of the run that continues an author after run `r`, skipping a few
// punctuation tokens labeled OTH, or runs.size() if none.
std::size_t next_name_run(const LabeledSequence& seq, const std::vector<Run>& runs, std::size_t r,
                          Label wanted) {
  std::size_t skipped = 0;
  for (std::size_t k = r + 1; k < runs.size(); ++k) {
    if (runs[k].label == wanted) return k;
    if (runs[k].label != Label::Oth) break;
    for (std::size_t t = runs[k].first; t <= runs[k].last; ++t) {
      if (seq.tokens[t].kind != TokenKind::Other || ++skipped > kMaxNamePunctuation) return runs.size();
    }
  }
  return runs.size();
}

std::optional<FirstAuthor> first_author(const LabeledSequence& seq, const std::vector<Run>& runs) {
  const auto it = std::find_if(runs.begin(), runs.end(), [](const Run& r) { return is_author_label(r.label); });
  if (it == runs.end()) return std::nullopt;
  const std::size_t r = static_cast<std::size_t>(it - runs.begin());

  std::optional<std::size_t> given_run;
  std::optional<std::size_t> surname_run;
  if (runs[r].label == Label::AuFn) {
    given_run = r;
    const std::size_t k = next_name_run(seq, runs, r, Label::AuSn);
    if (k < runs.size()) surname_run = k;
  } else {
    surname_run = r;
    const std::size_t k = next_name_run(seq, runs, r, Label::AuFn);
    if (k < runs.size()) given_run = k;
  }

  std::vector<std::string> given;
  std::vector<std::string> surname;
  if (given_run) given = split_words(seq.tokens.span_text(runs[*given_run].first, runs[*given_run].last));
  if (surname_run) surname = split_words(seq.tokens.span_text(runs[*surname_run].first, runs[*surname_run].last));
  return format_first_author(given, surname);
}

int source_priority(Label l) {
  switch (l) {
    case Label::Src: return 0;
    case Label::Doi: return 1;
    case Label::Arxiv: return 2;
    case Label::Url: return 3;
    default: return 4;
  }
}

}  // namespace

std::string_view to_string(FieldType type) noexcept { return kFieldNames[static_cast<std::size_t>(type)]; }

std::optional<FieldType> parse_field_type(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFieldTypeCount; ++i) {
    if (kFieldNames[i] == name) return kFieldTypes[i];
  }
  return std::nullopt;
}

std::string_view to_string(Label label) noexcept { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<Label> parse_label(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (kLabelNames[i] == name) return kLabels[i];
  }
  return std::nullopt;
}

std::optional<FieldType> map_label(Label label) noexcept {
  switch (label) {
    case Label::AuFn:
    case Label::AuSn: return FieldType::Author;
    case Label::Src:
    case Label::Doi:
    case Label::Url:
    case Label::Arxiv: return FieldType::Source;
    case Label::Year: return FieldType::Year;
    case Label::Vol: return FieldType::Volume;
    case Label::Issue: return FieldType::Issue;
    case Label::Fpage: return FieldType::Page;
    case Label::Org: return FieldType::Organization;
    case Label::Title:
    case Label::Lpage:
    case Label::Oth: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string_view> ParsedReference::get(FieldType type) const noexcept {
  for (const auto& f : fields_) {
    if (f.type == type) return std::string_view(f.value);
  }
  return std::nullopt;
}

void ParsedReference::set(FieldType type, std::string value) {
  auto it = std::lower_bound(fields_.begin(), fields_.end(), type,
                             [](const MetadataField& f, FieldType t) { return f.type < t; });
  if (it != fields_.end() && it->type == type) {
    it->value = std::move(value);
  } else {
    fields_.insert(it, MetadataField{type, std::move(value)});
  }
}

void ParsedReference::erase(FieldType type) {
  std::erase_if(fields_, [type](const MetadataField& f) { return f.type == type; });
}

LabeledSequence::LabeledSequence(TokenSequence t, std::vector<Label> l) : tokens(std::move(t)), labels(std::move(l)) {
  if (tokens.size() != labels.size()) {
    throw Error("labeled sequence has " + std::to_string(tokens.size()) + " tokens but " +
                std::to_string(labels.size()) + " labels");
  }
}

FirstAuthor format_first_author(std::span<const std::string> given_tokens,
                                std::span<const std::string> surname_tokens) {
  if (given_tokens.empty() && surname_tokens.empty()) throw Error("author has neither given names nor surname");

  FirstAuthor out;
  if (surname_tokens.empty()) {
    out.surname_missing = true;
    for (const auto& g : given_tokens) {
      if (!out.text.empty()) out.text += ' ';
      out.text += g;
    }
    return out;
  }
  for (const auto& s : surname_tokens) {
    if (!out.text.empty()) out.text += ' ';
    out.text += s;
  }
  // Initial: the first letter of the given names; punctuation and digits
  // that ended up labeled as given names are skipped.
  for (const auto& g : given_tokens) {
    for (std::size_t pos = 0; pos < g.size();) {
      const text::Decoded d = text::decode(g, pos);
      if (text::is_letter(d.cp)) {
        out.text += ", ";
        text::append_utf8(out.text, text::to_upper(d.cp));
        return out;
      }
      pos += d.len;
    }
  }
  return out;
}

ParsedReference assemble_fields(const LabeledSequence& seq) {
  ParsedReference ref;
  ref.source_string = seq.tokens.original();
  const std::vector<Run> runs = label_runs(seq);

  if (auto author = first_author(seq, runs)) ref.set(FieldType::Author, std::move(author->text));

  const Run* best_source = nullptr;
  for (const Run& run : runs) {
    const auto type = map_label(run.label);
    if (!type || *type == FieldType::Author) continue;
    if (*type == FieldType::Source) {
      if (!best_source || source_priority(run.label) < source_priority(best_source->label)) best_source = &run;
      continue;
    }
    if (!ref.has(*type)) ref.set(*type, std::string(seq.tokens.span_text(run.first, run.last)));
  }
  if (best_source) ref.set(FieldType::Source, std::string(seq.tokens.span_text(best_source->first, best_source->last)));
  return ref;
}

}  // namespace refparse

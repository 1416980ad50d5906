#include "refparse/evaluate.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "refparse/error.hpp"
#include "refparse/text.hpp"

namespace refparse::eval {

namespace {

struct Entity {
  std::string_view name;
  char value;
};
constexpr std::array<Entity, 5> kEntities = {
    {{"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}}};

std::string decode_entities(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size();) {
    bool matched = false;
    if (v[i] == '&') {
      for (const auto& e : kEntities) {
        if (v.substr(i, e.name.size()) == e.name) {
          out.push_back(e.value);
          i += e.name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(v[i++]);
  }
  return out;
}

std::string format_full(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_2dp(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string normalize_value(std::string_view v) {
  const std::string lowered = text::to_lower(decode_entities(v));
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < lowered.size();) {
    const text::Decoded d = text::decode(lowered, i);
    if (text::is_space(d.cp)) {
      pending_space = true;
    } else {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      if (text::is_hyphen_like(d.cp)) {
        out.push_back('-');
      } else {
        out.append(lowered, i, d.len);
      }
    }
    i += d.len;
  }
  return out;
}

std::vector<Judgment> judge(std::span<const MetadataField> extracted, std::span<const MetadataField> truth,
                            std::size_t reference_id) {
  std::vector<std::string> truth_norm;
  truth_norm.reserve(truth.size());
  for (const auto& t : truth) truth_norm.push_back(normalize_value(t.value));
  std::vector<bool> consumed(truth.size(), false);

  std::vector<Judgment> out;
  out.reserve(extracted.size());
  for (const auto& field : extracted) {
    const std::string norm = normalize_value(field.value);
    Verdict verdict = Verdict::Incorrect;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (!consumed[k] && truth[k].type == field.type && truth_norm[k] == norm) {
        consumed[k] = true;
        verdict = Verdict::Correct;
        break;
      }
    }
    out.push_back(Judgment{reference_id, field, verdict});
  }
  return out;
}

std::vector<Judgment> judge(const ParsedReference& extracted, const ParsedReference& truth,
                            std::size_t reference_id) {
  return judge(extracted.fields(), truth.fields(), reference_id);
}

double f1_score(double precision, double recall) noexcept {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Scores scores(const Counts& c) noexcept {
  Scores s;
  s.precision = c.extracted ? static_cast<double>(c.correct) / static_cast<double>(c.extracted) : 0.0;
  s.recall = c.expected ? static_cast<double>(c.correct) / static_cast<double>(c.expected) : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

Scores MetricsReport::macro() const noexcept {
  Scores sum;
  std::size_t n = 0;
  for (const Counts& c : per_field) {
    if (c.expected == 0 && c.extracted == 0) continue;
    const Scores s = scores(c);
    sum.precision += s.precision, sum.recall += s.recall, sum.f1 += s.f1;
    ++n;
  }
  if (n == 0) return sum;
  const double k = static_cast<double>(n);
  return Scores{sum.precision / k, sum.recall / k, sum.f1 / k};
}

ExpectedCounts expected_counts(std::span<const ParsedReference> truths) {
  ExpectedCounts counts{};
  for (const auto& t : truths) {
    for (const auto& f : t.fields()) ++counts[static_cast<std::size_t>(f.type)];
  }
  return counts;
}

MetricsReport compute_metrics(std::span<const Judgment> judgments, const ExpectedCounts& expected) {
  MetricsReport report;
  for (const auto& j : judgments) {
    Counts& c = report.per_field[static_cast<std::size_t>(j.field.type)];
    ++c.extracted;
    if (j.verdict == Verdict::Correct) ++c.correct;
  }
  for (std::size_t k = 0; k < kFieldTypeCount; ++k) {
    report.per_field[k].expected = expected[k];
    report.overall += report.per_field[k];
  }
  return report;
}

MetricsReport evaluate_corpus(std::span<const ParsedReference> predicted, std::span<const ParsedReference> truths) {
  if (predicted.size() != truths.size()) {
    throw Error("prediction/truth count mismatch: " + std::to_string(predicted.size()) + " vs " +
                std::to_string(truths.size()));
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(predicted.size());
  std::vector<std::vector<Judgment>> per_ref(predicted.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    per_ref[static_cast<std::size_t>(i)] =
        judge(predicted[static_cast<std::size_t>(i)], truths[static_cast<std::size_t>(i)], static_cast<std::size_t>(i));
  }
  std::vector<Judgment> all;
  for (auto& v : per_ref) all.insert(all.end(), v.begin(), v.end());
  return compute_metrics(all, expected_counts(truths));
}

RenderedReport render_report(const MetricsReport& report) {
  std::ostringstream text;
  std::ostringstream tsv;
  char line[160];

  std::snprintf(line, sizeof line, "%-14s %9s %7s %5s %8s %10s %9s\n", "field", "precision", "recall", "f1", "correct",
                "extracted", "expected");
  text << line;
  tsv << "field\tprecision\trecall\tf1\tcorrect\textracted\texpected\n";

  auto text_row = [&](std::string_view name, const Scores& s, const Counts& c) {
    std::snprintf(line, sizeof line, "%-14.*s %9s %7s %5s %8zu %10zu %9zu\n", static_cast<int>(name.size()),
                  name.data(), format_2dp(s.precision).c_str(), format_2dp(s.recall).c_str(),
                  format_2dp(s.f1).c_str(), c.correct, c.extracted, c.expected);
    text << line;
  };
  auto tsv_row = [&](std::string_view name, const Scores& s, const Counts& c) {
    tsv << name << '\t' << format_full(s.precision) << '\t' << format_full(s.recall) << '\t' << format_full(s.f1)
        << '\t' << c.correct << '\t' << c.extracted << '\t' << c.expected << '\n';
  };

  for (FieldType t : kFieldTypes) {
    const Counts& c = report.per_field[static_cast<std::size_t>(t)];
    text_row(to_string(t), scores(c), c);
    tsv_row(to_string(t), scores(c), c);
  }
  text_row("overall", report.micro(), report.overall);
  tsv_row("overall_micro", report.micro(), report.overall);
  tsv_row("overall_macro", report.macro(), report.overall);
  return RenderedReport{text.str(), tsv.str()};
}

}  // namespace refparse::eval

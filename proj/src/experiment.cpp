#include "refparse/experiment.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "refparse/error.hpp"
#include "refparse/jsonl.hpp"
#include "refparse/rules.hpp"

namespace refparse {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<ParsedReference> crf_parse(const crf::CrfModel& model, const std::vector<std::string>& strings) {
  const auto tagged = crf::tag_all(model, strings);
  std::vector<ParsedReference> out;
  out.reserve(tagged.size());
  for (const auto& seq : tagged) out.push_back(assemble_fields(seq));
  return out;
}

// Side-by-side micro scores and per-field F1, one row per engine.
void render_comparison(ExperimentResult& result) {
  std::ostringstream text, tsv;
  text << "engine          precision  recall    f1";
  tsv << "engine\tprecision\trecall\tf1";
  for (FieldType t : kFieldTypes) {
    text << "  " << to_string(t).substr(0, 6) << std::string(6 - std::min<std::size_t>(6, to_string(t).size()), ' ');
    tsv << "\tf1_" << to_string(t);
  }
  text << '\n';
  tsv << '\n';
  for (const EngineReport& r : result.reports) {
    const eval::Scores m = r.metrics.micro();
    std::string name = r.engine;
    name.resize(std::max<std::size_t>(name.size(), 14), ' ');
    text << name << "  " << fixed2(m.precision) << "       " << fixed2(m.recall) << "    " << fixed2(m.f1);
    tsv << r.engine << '\t' << shortest(m.precision) << '\t' << shortest(m.recall) << '\t' << shortest(m.f1);
    for (FieldType t : kFieldTypes) {
      const double f1 = r.metrics.field_scores(t).f1;
      text << "  " << fixed2(f1) << "  ";
      tsv << '\t' << shortest(f1);
    }
    text << '\n';
    tsv << '\n';
  }
  result.comparison_text = text.str();
  result.comparison_tsv = tsv.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (styles.empty()) throw Error("experiment needs at least one style");
  if (!run_crf && !run_rules) throw Error("experiment needs at least one engine");
  if (outdir.empty()) throw Error("experiment needs an output directory");
  noise.validate();
  train.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  for (const auto& path : {cfg.default_model, cfg.retrained_model, cfg.rules_file}) {
    if (path && !fs::exists(*path)) throw Error("missing file: " + *path);
  }
  if (cfg.run_crf && cfg.train_size == 0 && !cfg.retrained_model && !cfg.default_model) {
    throw Error("the crf engine needs training data or a model file");
  }
  const fs::path out(cfg.outdir);
  fs::create_directories(out);

  std::vector<gen::StyleTemplate> styles;
  for (const auto& name : cfg.styles) styles.push_back(gen::builtin_style(name));
  auto corpus = gen::generate_corpus(cfg.train_size + cfg.test_size, styles, cfg.noise, cfg.seed);
  const auto split = corpus.begin() + static_cast<std::ptrdiff_t>(cfg.train_size);
  const std::vector<gen::GeneratedReference> train_part(corpus.begin(), split);
  const std::vector<gen::GeneratedReference> test_part(split, corpus.end());
  corpus.clear();
  gen::write_corpus(train_part, (out / "train").string());
  gen::write_corpus(test_part, (out / "test").string());

  std::vector<std::string> strings;
  std::vector<ParsedReference> truths;
  for (const auto& g : test_part) {
    strings.push_back(g.noisy.tokens.original());
    truths.push_back(g.truth);
  }

  ExperimentResult result;
  auto record = [&](const std::string& engine, const std::vector<ParsedReference>& predicted) {
    std::ostringstream jsonl;
    for (const auto& p : predicted) jsonl << to_json_line(p) << '\n';
    write_file(out / ("predictions-" + engine + ".jsonl"), jsonl.str());
    EngineReport rep{engine, eval::evaluate_corpus(predicted, truths)};
    const eval::RenderedReport rendered = eval::render_report(rep.metrics);
    write_file(out / ("report-" + engine + ".txt"), rendered.text);
    write_file(out / ("report-" + engine + ".tsv"), rendered.tsv);
    result.reports.push_back(std::move(rep));
  };

  if (cfg.run_rules) {
    const rules::RuleSet rules =
        cfg.rules_file ? rules::RuleSet::parse(read_file(*cfg.rules_file)) : rules::RuleSet::defaults();
    record("rules", rules::rule_parse_all(strings, rules));
  }
  if (cfg.run_crf) {
    if (cfg.default_model) record("crf-default", crf_parse(crf::load_model_file(*cfg.default_model), strings));
    std::optional<crf::CrfModel> model;
    if (cfg.retrained_model) {
      model = crf::load_model_file(*cfg.retrained_model);
    } else if (cfg.train_size > 0) {
      std::vector<LabeledSequence> train_set;
      train_set.reserve(train_part.size());
      for (const auto& g : train_part) train_set.push_back(g.noisy);
      model = crf::train(train_set, cfg.train).model;
      crf::save_model_file(*model, (out / "model.json").string());
      result.trained = true;
    }
    if (model) record("crf-retrained", crf_parse(*model, strings));
  }

  render_comparison(result);
  write_file(out / "comparison.txt", result.comparison_text);
  write_file(out / "comparison.tsv", result.comparison_tsv);
  return result;
}

}  // namespace refparse

// refparse command-line entry point.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "refparse/align.hpp"
#include "refparse/annotate.hpp"
#include "refparse/crf.hpp"
#include "refparse/error.hpp"
#include "refparse/evaluate.hpp"
#include "refparse/experiment.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/jsonl.hpp"
#include "refparse/rules.hpp"
#include "refparse/tokenize.hpp"

#ifndef REFPARSE_VERSION
#define REFPARSE_VERSION "0.0.0"
#endif

using namespace refparse;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::vector<std::string> read_lines_from(const std::string& path) {
  if (path == "-") return read_lines(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return read_lines(in);
}

// Writes to `path`, or stdout for "-".
template <class F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
  } else {
    auto out = open_out(path);
    write(out);
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<gen::StyleTemplate> resolve_styles(const std::string& names, const std::string& style_file) {
  std::vector<gen::StyleTemplate> from_file;
  if (!style_file.empty()) from_file = gen::parse_style_file(read_file(style_file));
  if (names.empty() || names == "default") return from_file.empty() ? gen::default_styles() : from_file;
  if (names == "all") return gen::builtin_styles();
  std::vector<gen::StyleTemplate> out;
  for (const auto& n : split_list(names)) {
    const auto it = std::find_if(from_file.begin(), from_file.end(), [&](const auto& s) { return s.name == n; });
    out.push_back(it != from_file.end() ? *it : gen::builtin_style(n));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bibliographic reference parsing toolkit"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the artifact and model-format versions");

  // tokenize
  auto* tok = app.add_subcommand("tokenize", "Print tokens as <kind>\\t<text>, a blank line between references");
  std::string tok_in = "-";
  std::vector<std::string> tok_text;
  tok->add_option("--in", tok_in, "Reference strings, one per line ('-' = stdin)");
  tok->add_option("text", tok_text, "Reference strings given directly");

  // train
  auto* tr = app.add_subcommand("train", "Train a CRF model on an annotation corpus");
  std::string tr_corpus, tr_out;
  crf::TrainConfig tr_cfg;
  tr->add_option("--corpus", tr_corpus, "Annotation corpus (<citations> XML)")->required();
  tr->add_option("--out", tr_out, "Model file to write")->required();
  tr->add_option("--lambda", tr_cfg.lambda, "L2 regularization strength")->capture_default_str();
  tr->add_option("--epochs", tr_cfg.max_epochs, "Maximum optimizer iterations")->capture_default_str();
  tr->add_option("--tolerance", tr_cfg.tolerance, "Relative loss-change stopping tolerance")->capture_default_str();
  tr->add_option("--seed", tr_cfg.seed, "Accepted for symmetry; training is deterministic")->capture_default_str();
  bool tr_verbose = false;
  tr->add_flag("--verbose", tr_verbose, "Print the loss after every iteration");

  // parse
  auto* pa = app.add_subcommand("parse", "Parse reference strings into JSONL records");
  std::string pa_engine = "crf", pa_model, pa_rules, pa_in = "-", pa_out = "-";
  pa->add_option("--engine", pa_engine, "crf or rules")->check(CLI::IsMember({"crf", "rules"}))->capture_default_str();
  pa->add_option("--model", pa_model, "CRF model file (engine crf)");
  pa->add_option("--rules", pa_rules, "Rule file (engine rules); built-in rules when omitted");
  pa->add_option("--in", pa_in, "Reference strings, one per line ('-' = stdin)");
  pa->add_option("--out", pa_out, "JSONL output ('-' = stdout)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score predictions against ground truth");
  std::string ev_pred, ev_truth, ev_report;
  ev->add_option("--pred", ev_pred, "Predicted JSONL")->required();
  ev->add_option("--truth", ev_truth, "Ground-truth JSONL")->required();
  ev->add_option("--report", ev_report, "TSV report to write; the text table goes to stdout");

  // align
  auto* al = app.add_subcommand("align", "Pair extracted reference strings with ground-truth records");
  std::string al_strings, al_truth, al_out = "-";
  double al_threshold = align::kDefaultThreshold;
  al->add_option("--strings", al_strings, "Reference strings, one per line")->required();
  al->add_option("--truth", al_truth, "Ground-truth JSONL, e.g. <prefix>.fields.jsonl (every string value is used)")->required();
  al->add_option("--out", al_out, "TSV of string index, truth index and similarity ('-' = stdout)");
  al->add_option("--threshold", al_threshold, "Minimum similarity of a pair")->capture_default_str();

  // generate
  auto* ge = app.add_subcommand("generate", "Generate a synthetic annotated corpus");
  std::size_t ge_n = 0;
  std::string ge_styles = "default", ge_style_file, ge_prefix;
  double ge_p = 0.0;
  std::uint64_t ge_seed = 42;
  ge->add_option("--n", ge_n, "Number of references")->required();
  ge->add_option("--styles", ge_styles, "Comma-separated style names, 'default' or 'all'")->capture_default_str();
  ge->add_option("--style-file", ge_style_file, "Extra style templates (<name>\\t<template> per line)");
  ge->add_option("--noise-p", ge_p, "Per-character corruption probability")->capture_default_str();
  ge->add_option("--seed", ge_seed, "Random seed")->capture_default_str();
  ge->add_option("--out-prefix", ge_prefix, "Writes <prefix>.xml, .jsonl, .txt, .fields.jsonl and .meta.tsv")->required();

  // run
  auto* ru = app.add_subcommand("run", "Generate, train, parse and evaluate in one go");
  ExperimentConfig ex;
  std::string ru_styles = "acm,apa,numbers-only,chem-acs,vancouver", ru_engines = "crf,rules";
  std::string ru_default_model, ru_model, ru_rules;
  ru->add_option("--train", ex.train_size, "Training references")->capture_default_str();
  ru->add_option("--test", ex.test_size, "Test references")->capture_default_str();
  ru->add_option("--styles", ru_styles, "Comma-separated built-in style names")->capture_default_str();
  ru->add_option("--noise-p", ex.noise.p, "Per-character corruption probability")->capture_default_str();
  ru->add_option("--engines", ru_engines, "Comma-separated subset of crf,rules")->capture_default_str();
  ru->add_option("--lambda", ex.train.lambda, "L2 regularization strength")->capture_default_str();
  ru->add_option("--epochs", ex.train.max_epochs, "Maximum optimizer iterations")->capture_default_str();
  ru->add_option("--seed", ex.seed, "Random seed")->capture_default_str();
  ru->add_option("--out-dir", ex.outdir, "Output directory")->required();
  ru->add_option("--default-model", ru_default_model, "Out-of-the-box model to compare against");
  ru->add_option("--model", ru_model, "Use this model instead of training");
  ru->add_option("--rules", ru_rules, "Rule file for the rules engine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (show_version) {
      std::cout << "refparse " << REFPARSE_VERSION << " (model format " << crf::kModelFormatVersion << ")\n";
      return 0;
    }
    if (*tok) {
      std::vector<std::string> inputs = tok_text.empty() ? read_lines_from(tok_in) : tok_text;
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (k > 0) std::cout << '\n';
        const TokenSequence seq = tokenize(inputs[k]);
        for (const Token& t : seq.tokens()) std::cout << to_string(t.kind) << '\t' << t.text << '\n';
      }
    } else if (*tr) {
      const auto records = annotate::parse_corpus(read_file(tr_corpus));
      std::vector<LabeledSequence> corpus;
      corpus.reserve(records.size());
      for (const auto& r : records) {
        if (r.derived.size() > 0) corpus.push_back(r.derived);
      }
      std::function<void(const crf::EpochInfo&)> progress;
      if (tr_verbose) {
        progress = [](const crf::EpochInfo& e) { std::cerr << "iteration " << e.epoch << " loss " << e.loss << '\n'; };
      }
      const auto result = crf::train(corpus, tr_cfg, progress);
      crf::save_model_file(result.model, tr_out);
      std::cerr << "trained on " << corpus.size() << " references, " << result.model.shape().features
                << " features, final loss " << result.loss_history.back()
                << (result.converged ? " (converged)" : "") << '\n';
    } else if (*pa) {
      const auto lines = read_lines_from(pa_in);
      std::vector<ParsedReference> parsed;
      if (pa_engine == "rules") {
        const auto rules = pa_rules.empty() ? rules::RuleSet::defaults() : rules::RuleSet::parse(read_file(pa_rules));
        parsed = rules::rule_parse_all(lines, rules);
      } else {
        if (pa_model.empty()) throw Error("--model is required for the crf engine");
        const auto model = crf::load_model_file(pa_model);
        for (const auto& seq : crf::tag_all(model, lines)) parsed.push_back(assemble_fields(seq));
      }
      with_output(pa_out, [&](std::ostream& out) { write_jsonl(out, parsed); });
    } else if (*ev) {
      std::ifstream pred_in(ev_pred), truth_in(ev_truth);
      if (!pred_in) throw Error("cannot read " + ev_pred);
      if (!truth_in) throw Error("cannot read " + ev_truth);
      const auto pred = read_jsonl(pred_in);
      const auto truth = read_jsonl(truth_in);
      const auto rendered = eval::render_report(eval::evaluate_corpus(pred, truth));
      std::cout << rendered.text;
      if (!ev_report.empty()) open_out(ev_report) << rendered.tsv;
    } else if (*al) {
      const auto strings = read_lines_from(al_strings);
      std::vector<align::TruthValues> truths;
      for (const auto& line : read_lines_from(al_truth)) {
        if (!line.empty()) truths.push_back(align::truth_values_from_json(line));
      }
      const auto result = align::align_lists(strings, truths, al_threshold);
      with_output(al_out, [&](std::ostream& out) {
        out << "string_index\ttruth_index\tsimilarity\n";
        for (const auto& p : result.pairs) out << p.string_index << '\t' << p.truth_index << '\t' << p.similarity << '\n';
      });
    } else if (*ge) {
      gen::NoiseConfig noise;
      noise.p = ge_p;
      noise.seed = ge_seed;
      const auto corpus = gen::generate_corpus(ge_n, resolve_styles(ge_styles, ge_style_file), noise, ge_seed);
      gen::write_corpus(corpus, ge_prefix);
    } else if (*ru) {
      ex.styles = split_list(ru_styles);
      const auto engines = split_list(ru_engines);
      ex.run_crf = std::find(engines.begin(), engines.end(), "crf") != engines.end();
      ex.run_rules = std::find(engines.begin(), engines.end(), "rules") != engines.end();
      for (const auto& e : engines) {
        if (e != "crf" && e != "rules") throw Error("unknown engine '" + e + "'");
      }
      ex.noise.seed = ex.seed;
      if (!ru_default_model.empty()) ex.default_model = ru_default_model;
      if (!ru_model.empty()) ex.retrained_model = ru_model;
      if (!ru_rules.empty()) ex.rules_file = ru_rules;
      const auto result = run_experiment(ex);
      std::cout << result.comparison_text;
    } else {
      std::cout << app.help();
    }
  } catch (const std::exception& e) {
    std::cerr << "refparse: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refparse/crf.hpp"
#include "refparse/evaluate.hpp"
#include "refparse/gencorpus.hpp"

namespace refparse {

struct ExperimentConfig {
  std::size_t train_size = 10000;
  std::size_t test_size = 2000;
  std::vector<std::string> styles = {"acm", "apa", "numbers-only", "chem-acs", "vancouver"};
  gen::NoiseConfig noise{0.01, {0.4, 0.2, 0.2, 0.2}, 0};
  bool run_crf = true;
  bool run_rules = true;
  crf::TrainConfig train;
  std::uint64_t seed = 42;
  std::string outdir;
  std::optional<std::string> default_model;    // out-of-the-box model to compare against
  std::optional<std::string> retrained_model;  // use instead of training when set
  std::optional<std::string> rules_file;

  /// Throws Error on an empty style list, no engine, or a missing output directory name.
  void validate() const;
};

struct EngineReport {
  std::string engine;  // "rules", "crf-default", "crf-retrained"
  eval::MetricsReport metrics;
};

struct ExperimentResult {
  std::vector<EngineReport> reports;
  std::string comparison_text;
  std::string comparison_tsv;
  bool trained = false;
};

/// Generates the corpus (records [0, train) for training, the rest for
/// testing), trains or loads the CRF, parses the test strings with every
/// selected engine and writes under outdir:
///   train.{xml,jsonl,txt,meta.tsv}, test.{...}, model.json (when trained),
///   predictions-<engine>.jsonl, report-<engine>.{txt,tsv},
///   comparison.{txt,tsv}.
/// Throws Error when a requested model file is missing.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace refparse

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "refparse/crf_kernels.hpp"
#include "refparse/model.hpp"

namespace refparse::crf {

inline constexpr int kModelFormatVersion = 1;

/// Feature names of token `i`: surface, kind, shape, lexicon flags, space
/// flag and position decile, the same token templates for offsets -2..+2
/// (BOS/EOS past the ends), and a bias. Sorted, no duplicates.
/// Throws Error when `i` is out of range.
std::vector<std::string> extract_features(const TokenSequence& seq, std::size_t i);

/// Maps feature names to dense ids 0..F-1.
class FeatureVectorizer {
 public:
  FeatureVectorizer() = default;
  explicit FeatureVectorizer(std::vector<std::string> names);

  std::optional<std::uint32_t> id(std::string_view name) const;
  std::size_t size() const noexcept { return names_.size(); }
  std::span<const std::string> names() const noexcept { return names_; }

  /// Adds unseen names; returns the id either way.
  std::uint32_t intern(const std::string& name);

  /// Known feature ids per position; unknown features are dropped.
  FeaturizedSequence featurize(const TokenSequence& seq) const;

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
};

class CrfModel {
 public:
  CrfModel() = default;
  /// Zero weights. Throws Error on an empty or repeated label list.
  CrfModel(FeatureVectorizer vectorizer, std::vector<Label> labels, double lambda = 1.0);

  const FeatureVectorizer& vectorizer() const noexcept { return vectorizer_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Shape shape() const noexcept { return {vectorizer_.size(), labels_.size()}; }
  double lambda() const noexcept { return lambda_; }

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<double> weights() noexcept { return weights_; }
  std::span<const double> transition() const noexcept {
    return std::span<const double>(weights_).subspan(shape().emission_size());
  }
  double& emission(std::uint32_t feature, std::size_t label) { return weights_[feature * labels_.size() + label]; }
  double& transition(std::size_t prev, std::size_t cur) {
    return weights_[shape().emission_size() + prev * labels_.size() + cur];
  }

  /// Index of `label` in labels(); nullopt when the model does not know it.
  std::optional<std::uint8_t> label_index(Label label) const noexcept;

  /// Throws Error on an unknown label.
  Instance make_instance(const LabeledSequence& seq) const;

 private:
  FeatureVectorizer vectorizer_;
  std::vector<Label> labels_;
  std::vector<double> weights_;
  double lambda_ = 1.0;
};

struct TrainConfig {
  double lambda = 1.0;
  int max_epochs = 100;
  double tolerance = 1e-5;  // on relative loss change between epochs
  std::uint64_t seed = 0;

  /// Throws Error unless lambda > 0 and max_epochs >= 1.
  void validate() const;
};

struct EpochInfo {
  int epoch;
  double loss;
  double step;
};

struct TrainResult {
  CrfModel model;
  std::vector<double> loss_history;  // loss at the start and after every epoch
  bool converged = false;
};

/// Builds the vectorizer from the corpus (every feature seen at least once)
/// and minimizes the regularized loss with full-batch L-BFGS (Wolfe line
/// search). Throws Error on an empty corpus.
TrainResult train(std::span<const LabeledSequence> corpus, const TrainConfig& cfg,
                  const std::function<void(const EpochInfo&)>& on_epoch = {});

/// Continues training an existing model (its vectorizer is kept frozen).
TrainResult train_from(CrfModel init, std::span<const Instance> instances, const TrainConfig& cfg,
                       const std::function<void(const EpochInfo&)>& on_epoch = {});

/// Exact inference on a token sequence. Throws Error when it is empty.
Lattice forward_backward(const CrfModel& model, const TokenSequence& seq);
std::vector<Label> viterbi(const CrfModel& model, const TokenSequence& seq);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // model.shape().size() entries
};

/// Throws Error on an empty batch, an empty sequence, or a label the model
/// does not know.
LossAndGradient loss_and_gradient(const CrfModel& model, std::span<const LabeledSequence> batch);

/// tokenize + viterbi. Throws Error on an empty or whitespace-only string.
LabeledSequence tag(const CrfModel& model, std::string_view s);

/// Tags many strings (in parallel); empty strings yield empty sequences.
std::vector<LabeledSequence> tag_all(const CrfModel& model, std::span<const std::string> strings);

std::string save_model(const CrfModel& model);
/// Throws ModelFormatError on corrupt, truncated or version-mismatched input.
CrfModel load_model(std::string_view bytes);

void save_model_file(const CrfModel& model, const std::string& path);
CrfModel load_model_file(const std::string& path);

}  // namespace refparse::crf

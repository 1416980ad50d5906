#include <algorithm>

#include "refparse/crf.hpp"
#include "refparse/error.hpp"
#include "refparse/text.hpp"

namespace refparse::crf {

CrfModel::CrfModel(FeatureVectorizer vectorizer, std::vector<Label> labels, double lambda)
    : vectorizer_(std::move(vectorizer)), labels_(std::move(labels)), lambda_(lambda) {
  if (labels_.empty()) throw Error("model needs at least one label");
  if (labels_.size() > 255) throw Error("too many labels");
  for (std::size_t a = 0; a < labels_.size(); ++a) {
    for (std::size_t b = a + 1; b < labels_.size(); ++b) {
      if (labels_[a] == labels_[b]) throw Error("repeated label " + std::string(to_string(labels_[a])));
    }
  }
  if (!(lambda_ > 0.0)) throw Error("lambda must be positive");
  weights_.assign(shape().size(), 0.0);
}

std::optional<std::uint8_t> CrfModel::label_index(Label label) const noexcept {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::uint8_t>(it - labels_.begin());
}

Instance CrfModel::make_instance(const LabeledSequence& seq) const {
  Instance inst;
  inst.features = vectorizer_.featurize(seq.tokens);
  inst.labels.reserve(seq.size());
  for (Label l : seq.labels) {
    const auto idx = label_index(l);
    if (!idx) throw Error("label " + std::string(to_string(l)) + " is not in the model's label list");
    inst.labels.push_back(*idx);
  }
  return inst;
}

Lattice forward_backward(const CrfModel& model, const TokenSequence& seq) {
  if (seq.empty()) throw Error("forward-backward on an empty sequence");
  const auto scores = emission_scores(model.shape(), model.weights(), model.vectorizer().featurize(seq));
  return forward_backward(scores, model.transition(), model.labels().size());
}

std::vector<Label> viterbi(const CrfModel& model, const TokenSequence& seq) {
  if (seq.empty()) throw Error("viterbi on an empty sequence");
  const auto scores = emission_scores(model.shape(), model.weights(), model.vectorizer().featurize(seq));
  const auto path = viterbi(scores, model.transition(), model.labels().size());
  std::vector<Label> out;
  out.reserve(path.size());
  for (std::uint8_t y : path) out.push_back(model.labels()[y]);
  return out;
}

LossAndGradient loss_and_gradient(const CrfModel& model, std::span<const LabeledSequence> batch) {
  if (batch.empty()) throw Error("loss on an empty batch");
  std::vector<Instance> instances;
  instances.reserve(batch.size());
  for (const auto& seq : batch) {
    if (seq.size() == 0) throw Error("loss on an empty sequence");
    instances.push_back(model.make_instance(seq));
  }
  LossAndGradient out;
  out.gradient.resize(model.shape().size());
  out.loss = objective(model.shape(), instances, model.lambda(), model.weights(), out.gradient);
  return out;
}

LabeledSequence tag(const CrfModel& model, std::string_view s) {
  if (text::trim(s).empty()) throw Error("cannot tag an empty reference string");
  TokenSequence tokens = tokenize(s);
  std::vector<Label> labels = viterbi(model, tokens);
  return LabeledSequence(std::move(tokens), std::move(labels));
}

std::vector<LabeledSequence> tag_all(const CrfModel& model, std::span<const std::string> strings) {
  std::vector<LabeledSequence> out(strings.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(strings.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    TokenSequence tokens = tokenize(strings[idx]);
    if (tokens.empty()) {
      out[idx] = LabeledSequence(std::move(tokens), {});
      continue;
    }
    std::vector<Label> labels = viterbi(model, tokens);
    out[idx] = LabeledSequence(std::move(tokens), std::move(labels));
  }
  return out;
}

}  // namespace refparse::crf

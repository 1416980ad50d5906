#include <algorithm>
#include <cmath>
#include <vector>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "features_internal.hpp"
#include "refparse/crf.hpp"
#include "refparse/error.hpp"

namespace refparse::crf {

namespace {

// Correction pairs kept by L-BFGS.
constexpr int kLbfgsRank = 10;
// Sequences featurized per parallel block while the vocabulary grows.
constexpr std::size_t kFeaturizeBlock = 512;

// Builds the vocabulary in corpus order (ids are first-seen order) and the
// featurized instances in one pass.
std::pair<FeatureVectorizer, std::vector<FeaturizedSequence>> build_features(std::span<const LabeledSequence> corpus) {
  FeatureVectorizer vec;
  std::vector<FeaturizedSequence> featurized(corpus.size());
  std::vector<std::vector<std::vector<std::string>>> names;
  std::vector<std::uint32_t> ids;

  for (std::size_t start = 0; start < corpus.size(); start += kFeaturizeBlock) {
    const std::size_t stop = std::min(corpus.size(), start + kFeaturizeBlock);
    names.assign(stop - start, {});
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(start); k < static_cast<std::ptrdiff_t>(stop); ++k) {
      const auto idx = static_cast<std::size_t>(k);
      const TokenSequence& seq = corpus[idx].tokens;
      const auto templates = detail::sequence_templates(seq);
      auto& per_pos = names[idx - start];
      per_pos.resize(seq.size());
      for (std::size_t i = 0; i < seq.size(); ++i) detail::position_features(templates, i, per_pos[i]);
    }
    for (std::size_t idx = start; idx < stop; ++idx) {
      for (const auto& pos_names : names[idx - start]) {
        ids.clear();
        for (const auto& name : pos_names) ids.push_back(vec.intern(name));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        featurized[idx].push_position(ids);
      }
    }
  }
  return {std::move(vec), std::move(featurized)};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("lambda must be a positive finite number");
  if (max_epochs < 1) throw Error("max_epochs must be at least 1");
  if (!(tolerance >= 0.0)) throw Error("tolerance must be non-negative");
}

TrainResult train(std::span<const LabeledSequence> corpus, const TrainConfig& cfg,
                  const std::function<void(const EpochInfo&)>& on_epoch) {
  cfg.validate();
  if (corpus.empty()) throw Error("cannot train on an empty corpus");
  for (const auto& seq : corpus) {
    if (seq.size() == 0) throw Error("training corpus contains an empty sequence");
  }

  auto [vec, featurized] = build_features(corpus);
  CrfModel model(std::move(vec), std::vector<Label>(kLabels.begin(), kLabels.end()), cfg.lambda);

  std::vector<Instance> instances(corpus.size());
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    instances[k].features = std::move(featurized[k]);
    instances[k].labels.reserve(corpus[k].size());
    for (Label l : corpus[k].labels) instances[k].labels.push_back(*model.label_index(l));
  }
  return train_from(std::move(model), instances, cfg, on_epoch);
}

namespace {

class Objective final : public ceres::FirstOrderFunction {
 public:
  Objective(const Shape& shape, std::span<const Instance> instances, double lambda)
      : shape_(shape), instances_(instances), lambda_(lambda) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const std::span<const double> w(parameters, shape_.size());
    if (gradient) {
      *cost = objective(shape_, instances_, lambda_, w, std::span<double>(gradient, shape_.size()));
    } else {
      *cost = objective(shape_, instances_, lambda_, w, {});
    }
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return static_cast<int>(shape_.size()); }

 private:
  Shape shape_;
  std::span<const Instance> instances_;
  double lambda_;
};

class Progress final : public ceres::IterationCallback {
 public:
  Progress(TrainResult& result, const std::function<void(const EpochInfo&)>& on_epoch)
      : result_(result), on_epoch_(on_epoch) {}

  ceres::CallbackReturnType operator()(const ceres::IterationSummary& it) override {
    result_.loss_history.push_back(it.cost);
    if (it.iteration > 0 && on_epoch_) on_epoch_(EpochInfo{it.iteration, it.cost, it.step_size});
    return ceres::SOLVER_CONTINUE;
  }

 private:
  TrainResult& result_;
  const std::function<void(const EpochInfo&)>& on_epoch_;
};

}  // namespace

TrainResult train_from(CrfModel model, std::span<const Instance> instances, const TrainConfig& cfg,
                       const std::function<void(const EpochInfo&)>& on_epoch) {
  cfg.validate();
  if (instances.empty()) throw Error("cannot train on an empty corpus");
  const Shape shape = model.shape();

  std::vector<double> w(model.weights().begin(), model.weights().end());
  TrainResult result;
  Progress progress(result, on_epoch);

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_lbfgs_rank = kLbfgsRank;
  options.max_num_iterations = cfg.max_epochs;
  options.function_tolerance = cfg.tolerance;
  options.gradient_tolerance = 0.0;
  options.parameter_tolerance = 0.0;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  options.callbacks.push_back(&progress);

  ceres::GradientProblem problem(new Objective(shape, instances, cfg.lambda));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, w.data(), &summary);
  if (summary.termination_type == ceres::FAILURE) throw Error("training failed: " + summary.message);
  result.converged = summary.termination_type == ceres::CONVERGENCE;

  std::copy(w.begin(), w.end(), model.weights().begin());
  result.model = std::move(model);
  return result;
}

}  // namespace refparse::crf

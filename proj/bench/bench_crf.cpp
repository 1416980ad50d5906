// Reference (serial, plain log-space) kernels against the production
// kernels (factorized exponentials, OpenMP over instances).

#include <benchmark/benchmark.h>

#include <random>

#include "refparse/crf.hpp"
#include "refparse/gencorpus.hpp"

using namespace refparse;

namespace {

struct Fixture {
  crf::CrfModel model;
  std::vector<crf::Instance> instances;
  std::vector<std::string> strings;

  Fixture() {
    const auto corpus = gen::generate_corpus(500, gen::default_styles(), gen::NoiseConfig{0.01}, 1);
    crf::FeatureVectorizer v;
    for (const auto& g : corpus) {
      for (std::size_t i = 0; i < g.noisy.tokens.size(); ++i)
        for (const auto& f : crf::extract_features(g.noisy.tokens, i)) v.intern(f);
    }
    model = crf::CrfModel(v, std::vector<Label>(kLabels.begin(), kLabels.end()));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> d(0.0, 0.3);
    for (double& w : model.weights()) w = d(rng);
    for (const auto& g : corpus) {
      instances.push_back(model.make_instance(g.noisy));
      strings.push_back(g.noisy.tokens.original());
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::span<const crf::Instance> batch(const benchmark::State& state) {
  return std::span(fixture().instances).first(static_cast<std::size_t>(state.range(0)));
}

void BM_ObjectiveReference(benchmark::State& state) {
  const auto& f = fixture();
  std::vector<double> grad(f.model.shape().size());
  for (auto _ : state)
    benchmark::DoNotOptimize(crf::reference::objective(f.model.shape(), batch(state), 1.0, f.model.weights(), grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ObjectiveParallel(benchmark::State& state) {
  const auto& f = fixture();
  std::vector<double> grad(f.model.shape().size());
  for (auto _ : state)
    benchmark::DoNotOptimize(crf::objective(f.model.shape(), batch(state), 1.0, f.model.weights(), grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Single-sequence inference on precomputed emission scores.
template <bool Reference>
void BM_ForwardBackward(benchmark::State& state) {
  const auto& f = fixture();
  const auto scores = crf::emission_scores(f.model.shape(), f.model.weights(), f.instances[0].features);
  const auto t = f.model.transition();
  for (auto _ : state) {
    if constexpr (Reference) {
      benchmark::DoNotOptimize(crf::reference::forward_backward(scores, t, f.model.shape().labels));
    } else {
      benchmark::DoNotOptimize(crf::forward_backward(scores, t, f.model.shape().labels));
    }
  }
}

template <bool Reference>
void BM_Viterbi(benchmark::State& state) {
  const auto& f = fixture();
  const auto scores = crf::emission_scores(f.model.shape(), f.model.weights(), f.instances[0].features);
  const auto t = f.model.transition();
  for (auto _ : state) {
    if constexpr (Reference) {
      benchmark::DoNotOptimize(crf::reference::viterbi(scores, t, f.model.shape().labels));
    } else {
      benchmark::DoNotOptimize(crf::viterbi(scores, t, f.model.shape().labels));
    }
  }
}

void BM_TagSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    for (const auto& s : f.strings) benchmark::DoNotOptimize(crf::tag(f.model, s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.strings.size()));
}

void BM_TagParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(crf::tag_all(f.model, f.strings));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.strings.size()));
}

}  // namespace

BENCHMARK(BM_ObjectiveReference)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ObjectiveParallel)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardBackward<true>)->Name("BM_ForwardBackwardReference");
BENCHMARK(BM_ForwardBackward<false>)->Name("BM_ForwardBackwardParallel");
BENCHMARK(BM_Viterbi<true>)->Name("BM_ViterbiReference");
BENCHMARK(BM_Viterbi<false>)->Name("BM_ViterbiParallel");
BENCHMARK(BM_TagSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TagParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

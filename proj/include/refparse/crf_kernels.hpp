#pragma once

// Numeric core of the linear-chain CRF. Every kernel exists twice: a plain
// log-space implementation in `reference` (serial, used as the test oracle)
// and the production version used by training and tagging, which
// factorizes the transition exponentials and runs the per-instance work
// under OpenMP with a fixed-order reduction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace refparse::crf {

/// Per-position feature ids in CSR layout.
struct FeaturizedSequence {
  std::vector<std::uint32_t> offsets{0};  // size() + 1 entries
  std::vector<std::uint32_t> ids;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::span<const std::uint32_t> at(std::size_t i) const noexcept {
    return std::span<const std::uint32_t>(ids).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
  void push_position(std::span<const std::uint32_t> features) {
    ids.insert(ids.end(), features.begin(), features.end());
    offsets.push_back(static_cast<std::uint32_t>(ids.size()));
  }
};

/// A training instance: features plus gold label indices (into the model's label list).
struct Instance {
  FeaturizedSequence features;
  std::vector<std::uint8_t> labels;
};

/// Weight layout shared by all kernels: emission weights feature-major
/// (F x L), then transition weights (L x L, previous label major).
struct Shape {
  std::size_t features = 0;
  std::size_t labels = 0;

  std::size_t emission_size() const noexcept { return features * labels; }
  std::size_t size() const noexcept { return features * labels + labels * labels; }
};

/// n x L emission scores: dot product of active features with their weights.
std::vector<double> emission_scores(const Shape& shape, std::span<const double> weights,
                                    const FeaturizedSequence& seq);

struct Lattice {
  double log_z = 0.0;
  std::vector<double> node;  // n x L position marginals
  std::vector<double> edge;  // (n-1) x L x L pairwise marginals, [i][prev][cur]
};

/// Score of one label path: emissions plus transitions.
double path_score(std::span<const double> scores, std::span<const double> transition, std::size_t labels,
                  std::span<const std::uint8_t> path);

/// Exact inference over precomputed emission scores. Requires n >= 1.
Lattice forward_backward(std::span<const double> scores, std::span<const double> transition, std::size_t labels);

/// Highest-scoring path; ties go to the lowest label index at every step.
std::vector<std::uint8_t> viterbi(std::span<const double> scores, std::span<const double> transition,
                                  std::size_t labels);

/// Regularized negative conditional log-likelihood
///   sum_k (log Z_k - score_k(gold)) + lambda/2 * |w|^2
/// If `gradient` is non-empty it must have shape.size() entries and
/// receives the gradient. The result does not depend on the number of
/// threads.
double objective(const Shape& shape, std::span<const Instance> batch, double lambda, std::span<const double> weights,
                 std::span<double> gradient);

namespace reference {

double log_sum_exp(std::span<const double> v);
Lattice forward_backward(std::span<const double> scores, std::span<const double> transition, std::size_t labels);
std::vector<std::uint8_t> viterbi(std::span<const double> scores, std::span<const double> transition,
                                  std::size_t labels);
double objective(const Shape& shape, std::span<const Instance> batch, double lambda, std::span<const double> weights,
                 std::span<double> gradient);

}  // namespace reference

}  // namespace refparse::crf

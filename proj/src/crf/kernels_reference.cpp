// Straightforward log-space CRF kernels. Serial and unoptimized on purpose:
// tests compare the production kernels against these.

#include <algorithm>
#include <cmath>
#include <limits>

#include "refparse/crf_kernels.hpp"

namespace refparse::crf::reference {

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Lattice forward_backward(std::span<const double> scores, std::span<const double> transition, std::size_t labels) {
  const std::size_t L = labels;
  const std::size_t n = scores.size() / L;
  std::vector<double> alpha(n * L);
  std::vector<double> beta(n * L, 0.0);
  std::vector<double> tmp(L);

  for (std::size_t y = 0; y < L; ++y) alpha[y] = scores[y];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) tmp[p] = alpha[(i - 1) * L + p] + transition[p * L + y];
      alpha[i * L + y] = scores[i * L + y] + log_sum_exp(tmp);
    }
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t y = 0; y < L; ++y) tmp[y] = transition[p * L + y] + scores[(i + 1) * L + y] + beta[(i + 1) * L + y];
      beta[i * L + p] = log_sum_exp(tmp);
    }
  }

  Lattice out;
  out.log_z = log_sum_exp(std::span<const double>(alpha).subspan((n - 1) * L, L));
  out.node.resize(n * L);
  for (std::size_t k = 0; k < n * L; ++k) out.node[k] = std::exp(alpha[k] + beta[k] - out.log_z);
  out.edge.resize((n - 1) * L * L);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t y = 0; y < L; ++y) {
        out.edge[((i - 1) * L + p) * L + y] = std::exp(alpha[(i - 1) * L + p] + transition[p * L + y] +
                                                       scores[i * L + y] + beta[i * L + y] - out.log_z);
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> viterbi(std::span<const double> scores, std::span<const double> transition,
                                  std::size_t labels) {
  const std::size_t L = labels;
  const std::size_t n = scores.size() / L;
  std::vector<double> delta(n * L);
  std::vector<std::uint8_t> back(n * L, 0);
  for (std::size_t y = 0; y < L; ++y) delta[y] = scores[y];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < L; ++y) {
      std::size_t arg = 0;
      double best = delta[(i - 1) * L] + transition[y];
      for (std::size_t p = 1; p < L; ++p) {
        const double v = delta[(i - 1) * L + p] + transition[p * L + y];
        if (v > best) best = v, arg = p;
      }
      delta[i * L + y] = best + scores[i * L + y];
      back[i * L + y] = static_cast<std::uint8_t>(arg);
    }
  }
  std::vector<std::uint8_t> path(n);
  std::size_t arg = 0;
  for (std::size_t y = 1; y < L; ++y) {
    if (delta[(n - 1) * L + y] > delta[(n - 1) * L + arg]) arg = y;
  }
  path[n - 1] = static_cast<std::uint8_t>(arg);
  for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i * L + path[i]];
  return path;
}

double objective(const Shape& shape, std::span<const Instance> batch, double lambda, std::span<const double> weights,
                 std::span<double> gradient) {
  const std::size_t L = shape.labels;
  const std::size_t E = shape.emission_size();
  const auto transition = weights.subspan(E);
  const bool want_grad = !gradient.empty();
  if (want_grad) std::fill(gradient.begin(), gradient.end(), 0.0);

  double loss = 0.0;
  for (const Instance& inst : batch) {
    const std::vector<double> scores = emission_scores(shape, weights, inst.features);
    const Lattice lat = forward_backward(scores, transition, L);
    loss += lat.log_z - path_score(scores, transition, L, inst.labels);
    if (!want_grad) continue;

    const std::size_t n = inst.labels.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t f : inst.features.at(i)) {
        for (std::size_t y = 0; y < L; ++y) gradient[f * L + y] += lat.node[i * L + y];
        gradient[f * L + inst.labels[i]] -= 1.0;
      }
    }
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t k = 0; k < L * L; ++k) gradient[E + k] += lat.edge[(i - 1) * L * L + k];
      gradient[E + inst.labels[i - 1] * L + inst.labels[i]] -= 1.0;
    }
  }

  double sq = 0.0;
  for (double w : weights) sq += w * w;
  loss += 0.5 * lambda * sq;
  if (want_grad) {
    for (std::size_t k = 0; k < weights.size(); ++k) gradient[k] += lambda * weights[k];
  }
  return loss;
}

}  // namespace refparse::crf::reference

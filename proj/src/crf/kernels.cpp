// Production CRF kernels.
//
// Forward and backward recursions stay in log space but replace the inner
// log-sum-exp by a product with exp(T - max) matrices computed once per
// weight vector, so each position costs L exponentials instead of L^2. A
// column whose scaled sum underflows falls back to the exact log-sum-exp.

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "refparse/crf_kernels.hpp"

namespace refparse::crf {

namespace {

// Scaled sums below this are recomputed exactly.
constexpr double kUnderflowGuard = DBL_MIN * 1e50;
// |exponent| bound for the factorized pairwise marginal.
constexpr double kFactorLimit = 600.0;
// Upper bound on per-chunk gradient buffers in objective().
constexpr std::size_t kGradientBufferBudget = std::size_t{256} << 20;
constexpr std::size_t kMaxChunks = 16;

struct TransitionCache {
  std::size_t labels;
  std::span<const double> t;
  std::vector<double> col_max;  // max over previous label, per current label
  std::vector<double> col_exp;  // exp(t[p][y] - col_max[y])
  std::vector<double> row_max;  // max over current label, per previous label
  std::vector<double> row_exp;  // exp(t[p][y] - row_max[p])

  TransitionCache(std::span<const double> transition, std::size_t L)
      : labels(L), t(transition), col_max(L), col_exp(L * L), row_max(L), row_exp(L * L) {
    for (std::size_t y = 0; y < L; ++y) {
      double m = t[y];
      for (std::size_t p = 1; p < L; ++p) m = std::max(m, t[p * L + y]);
      col_max[y] = m;
    }
    for (std::size_t p = 0; p < L; ++p) {
      double m = t[p * L];
      for (std::size_t y = 1; y < L; ++y) m = std::max(m, t[p * L + y]);
      row_max[p] = m;
    }
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t y = 0; y < L; ++y) {
        col_exp[p * L + y] = std::exp(t[p * L + y] - col_max[y]);
        row_exp[p * L + y] = std::exp(t[p * L + y] - row_max[p]);
      }
    }
  }
};

struct Workspace {
  std::vector<double> alpha, beta, u, v, tmp;

  void reserve(std::size_t n, std::size_t L) {
    alpha.resize(n * L);
    beta.resize(n * L);
    u.resize(L);
    v.resize(L);
    tmp.resize(L);
  }
};

double max_of(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t k = 1; k < n; ++k) m = std::max(m, x[k]);
  return m;
}

double lse(const double* x, std::size_t n) {
  const double m = max_of(x, n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(x[k] - m);
  return m + std::log(s);
}

// Fills ws.alpha/ws.beta and returns log Z. Optional outputs:
//   node      n x L position marginals
//   edge      (n-1) x L x L pairwise marginals
//   edge_sum  L x L pairwise marginals summed over positions (accumulated)
double run_lattice(const TransitionCache& tc, std::span<const double> scores, Workspace& ws, double* node,
                   double* edge, double* edge_sum) {
  const std::size_t L = tc.labels;
  const std::size_t n = scores.size() / L;
  ws.reserve(n, L);
  double* alpha = ws.alpha.data();
  double* beta = ws.beta.data();
  double* u = ws.u.data();
  double* v = ws.v.data();
  double* tmp = ws.tmp.data();

  for (std::size_t y = 0; y < L; ++y) alpha[y] = scores[y];
  for (std::size_t i = 1; i < n; ++i) {
    const double* prev = alpha + (i - 1) * L;
    const double a = max_of(prev, L);
    for (std::size_t p = 0; p < L; ++p) u[p] = std::exp(prev[p] - a);
    for (std::size_t y = 0; y < L; ++y) {
      double s = 0.0;
      for (std::size_t p = 0; p < L; ++p) s += u[p] * tc.col_exp[p * L + y];
      double value;
      if (s > kUnderflowGuard) {
        value = a + tc.col_max[y] + std::log(s);
      } else {
        for (std::size_t p = 0; p < L; ++p) tmp[p] = prev[p] + tc.t[p * L + y];
        value = lse(tmp, L);
      }
      alpha[i * L + y] = scores[i * L + y] + value;
    }
  }

  std::fill(beta + (n - 1) * L, beta + n * L, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double* next_beta = beta + (i + 1) * L;
    const double* next_score = scores.data() + (i + 1) * L;
    for (std::size_t y = 0; y < L; ++y) tmp[y] = next_score[y] + next_beta[y];
    const double b = max_of(tmp, L);
    for (std::size_t y = 0; y < L; ++y) v[y] = std::exp(tmp[y] - b);
    for (std::size_t p = 0; p < L; ++p) {
      double s = 0.0;
      for (std::size_t y = 0; y < L; ++y) s += tc.row_exp[p * L + y] * v[y];
      if (s > kUnderflowGuard) {
        beta[i * L + p] = b + tc.row_max[p] + std::log(s);
      } else {
        double best = tc.t[p * L] + tmp[0];
        for (std::size_t y = 1; y < L; ++y) best = std::max(best, tc.t[p * L + y] + tmp[y]);
        double acc = 0.0;
        for (std::size_t y = 0; y < L; ++y) acc += std::exp(tc.t[p * L + y] + tmp[y] - best);
        beta[i * L + p] = best + std::log(acc);
      }
    }
  }

  const double log_z = lse(alpha + (n - 1) * L, L);

  if (node) {
    for (std::size_t k = 0; k < n * L; ++k) node[k] = std::exp(alpha[k] + beta[k] - log_z);
  }
  if (edge || edge_sum) {
    for (std::size_t i = 1; i < n; ++i) {
      const double* prev = alpha + (i - 1) * L;
      const double a = max_of(prev, L);
      for (std::size_t p = 0; p < L; ++p) u[p] = std::exp(prev[p] - a);
      for (std::size_t y = 0; y < L; ++y) tmp[y] = scores[i * L + y] + beta[i * L + y];
      const double b = max_of(tmp, L);
      for (std::size_t y = 0; y < L; ++y) v[y] = std::exp(tmp[y] - b);
      double* out = edge ? edge + (i - 1) * L * L : nullptr;
      for (std::size_t y = 0; y < L; ++y) {
        const double c = a + b + tc.col_max[y] - log_z;
        if (std::fabs(c) < kFactorLimit) {
          const double f = std::exp(c) * v[y];
          for (std::size_t p = 0; p < L; ++p) {
            const double m = u[p] * tc.col_exp[p * L + y] * f;
            if (out) out[p * L + y] = m;
            if (edge_sum) edge_sum[p * L + y] += m;
          }
        } else {
          for (std::size_t p = 0; p < L; ++p) {
            const double m = std::exp(prev[p] + tc.t[p * L + y] + tmp[y] - log_z);
            if (out) out[p * L + y] = m;
            if (edge_sum) edge_sum[p * L + y] += m;
          }
        }
      }
    }
  }
  return log_z;
}

void emission_scores_into(const Shape& shape, std::span<const double> weights, const FeaturizedSequence& seq,
                          std::vector<double>& out) {
  const std::size_t L = shape.labels;
  const std::size_t n = seq.size();
  out.assign(n * L, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * L;
    for (std::uint32_t f : seq.at(i)) {
      const double* w = weights.data() + static_cast<std::size_t>(f) * L;
      for (std::size_t y = 0; y < L; ++y) row[y] += w[y];
    }
  }
}

// Loss of one instance; adds its gradient contribution to `grad` when given.
double instance_term(const Shape& shape, const TransitionCache& tc, std::span<const double> weights,
                     const Instance& inst, Workspace& ws, std::vector<double>& scores, std::vector<double>& node,
                     double* grad) {
  const std::size_t L = shape.labels;
  const std::size_t n = inst.labels.size();
  emission_scores_into(shape, weights, inst.features, scores);
  if (!grad) return run_lattice(tc, scores, ws, nullptr, nullptr, nullptr) - path_score(scores, tc.t, L, inst.labels);

  node.resize(n * L);
  double* trans_grad = grad + shape.emission_size();
  const double log_z = run_lattice(tc, scores, ws, node.data(), nullptr, trans_grad);
  for (std::size_t i = 0; i < n; ++i) {
    const double* marg = node.data() + i * L;
    const std::uint8_t gold = inst.labels[i];
    for (std::uint32_t f : inst.features.at(i)) {
      double* g = grad + static_cast<std::size_t>(f) * L;
      for (std::size_t y = 0; y < L; ++y) g[y] += marg[y];
      g[gold] -= 1.0;
    }
    if (i > 0) trans_grad[inst.labels[i - 1] * L + gold] -= 1.0;
  }
  return log_z - path_score(scores, tc.t, L, inst.labels);
}

}  // namespace

std::vector<double> emission_scores(const Shape& shape, std::span<const double> weights,
                                    const FeaturizedSequence& seq) {
  std::vector<double> out;
  emission_scores_into(shape, weights, seq, out);
  return out;
}

double path_score(std::span<const double> scores, std::span<const double> transition, std::size_t labels,
                  std::span<const std::uint8_t> path) {
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += scores[i * labels + path[i]];
    if (i > 0) s += transition[path[i - 1] * labels + path[i]];
  }
  return s;
}

Lattice forward_backward(std::span<const double> scores, std::span<const double> transition, std::size_t labels) {
  const std::size_t n = scores.size() / labels;
  const TransitionCache tc(transition, labels);
  Workspace ws;
  Lattice out;
  out.node.resize(n * labels);
  out.edge.resize((n - 1) * labels * labels);
  out.log_z = run_lattice(tc, scores, ws, out.node.data(), out.edge.data(), nullptr);
  return out;
}

std::vector<std::uint8_t> viterbi(std::span<const double> scores, std::span<const double> transition,
                                  std::size_t labels) {
  const std::size_t L = labels;
  const std::size_t n = scores.size() / L;
  std::vector<double> delta(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(L));
  std::vector<double> next(L);
  std::vector<std::uint8_t> back(n * L, 0);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < L; ++y) {
      std::size_t arg = 0;
      double best = delta[0] + transition[y];
      for (std::size_t p = 1; p < L; ++p) {
        const double v = delta[p] + transition[p * L + y];
        if (v > best) best = v, arg = p;
      }
      next[y] = best + scores[i * L + y];
      back[i * L + y] = static_cast<std::uint8_t>(arg);
    }
    delta.swap(next);
  }
  std::vector<std::uint8_t> path(n);
  std::size_t arg = 0;
  for (std::size_t y = 1; y < L; ++y) {
    if (delta[y] > delta[arg]) arg = y;
  }
  path[n - 1] = static_cast<std::uint8_t>(arg);
  for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i * L + path[i]];
  return path;
}

double objective(const Shape& shape, std::span<const Instance> batch, double lambda, std::span<const double> weights,
                 std::span<double> gradient) {
  const std::size_t n = batch.size();
  const std::size_t size = shape.size();
  const TransitionCache tc(weights.subspan(shape.emission_size()), shape.labels);
  std::vector<double> losses(n, 0.0);

  if (gradient.empty()) {
#pragma omp parallel
    {
      Workspace ws;
      std::vector<double> scores, node;
#pragma omp for schedule(dynamic, 64)
      for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        losses[idx] = instance_term(shape, tc, weights, batch[idx], ws, scores, node, nullptr);
      }
    }
  } else {
    // Chunk boundaries depend only on the problem, never on the thread
    // count, so the reduction order is fixed.
    const std::size_t by_memory = std::max<std::size_t>(1, kGradientBufferBudget / (size * sizeof(double) + 1));
    const std::size_t chunks = std::max<std::size_t>(1, std::min({n, kMaxChunks, by_memory}));
    std::vector<std::vector<double>> partial(chunks);
#pragma omp parallel
    {
      Workspace ws;
      std::vector<double> scores, node;
#pragma omp for schedule(dynamic, 1)
      for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const auto ci = static_cast<std::size_t>(c);
        std::vector<double>& buf = partial[ci];
        buf.assign(size, 0.0);
        const std::size_t lo = ci * n / chunks;
        const std::size_t hi = (ci + 1) * n / chunks;
        for (std::size_t k = lo; k < hi; ++k) {
          losses[k] = instance_term(shape, tc, weights, batch[k], ws, scores, node, buf.data());
        }
      }
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(size); ++k) {
      const auto idx = static_cast<std::size_t>(k);
      double g = 0.0;
      for (std::size_t c = 0; c < chunks; ++c) g += partial[c][idx];
      gradient[idx] = g + lambda * weights[idx];
    }
  }

  double loss = 0.0;
  for (double l : losses) loss += l;
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return loss + 0.5 * lambda * sq;
}

}  // namespace refparse::crf

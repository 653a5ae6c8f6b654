#include "imh/tsne.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "imh/kernels.hpp"
#include "imh/parallel.hpp"
#include "imh/rng.hpp"

namespace imh {

namespace {

constexpr double kPFloor = 1e-12;
constexpr double kEntropyTol = 1e-5;
constexpr int kBisectionSteps = 50;

Matrix pairwise_sq_dist(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix d2(n, n);
  parallel::for_each_index(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      d2(i, j) = i == j ? 0.0
                        : kernels::squared_distance(x.row(i), x.row(j), x.cols());
  });
  return d2;
}

// Student-t kernel values and their total, chunk-merged over rows so the
// normalizer is thread-count invariant.
double student_t_matrix(const Matrix& y, Matrix& t) {
  const std::size_t n = y.rows();
  std::vector<double> row_sum(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        t(i, j) = 0.0;
        continue;
      }
      const double v =
          1.0 / (1.0 + kernels::squared_distance(y.row(i), y.row(j), y.cols()));
      t(i, j) = v;
      s += v;
    }
    row_sum[i] = s;
  });
  return kernels::reduce_sum(row_sum);
}

}  // namespace

Matrix tsne_p_matrix(const Matrix& points, double perplexity) {
  const std::size_t m = points.rows();
  if (m < 4) throw ArgumentError("tsne: need at least four points");
  if (perplexity < 2.0)
    throw ArgumentError("tsne: perplexity must be at least 2");
  if (3.0 * perplexity > static_cast<double>(m - 1))
    throw ArgumentError("tsne: perplexity too large for the point count");

  const Matrix d2 = pairwise_sq_dist(points);
  const double target_entropy = std::log(perplexity);

  Matrix cond(m, m);
  parallel::for_each_index(m, [&](std::size_t i) {
    double beta = 1.0;
    double beta_min = -std::numeric_limits<double>::infinity();
    double beta_max = std::numeric_limits<double>::infinity();
    double* row = cond.row(i);

    for (int step = 0; step < kBisectionSteps; ++step) {
      double sum_p = 0.0, sum_dp = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        const double p = std::exp(-beta * d2(i, j));
        row[j] = p;
        sum_p += p;
        sum_dp += d2(i, j) * p;
      }
      const double entropy = std::log(sum_p) + beta * sum_dp / sum_p;
      const double diff = entropy - target_entropy;
      if (std::abs(diff) < kEntropyTol) break;
      if (diff > 0.0) {
        beta_min = beta;
        beta = std::isinf(beta_max) ? beta * 2.0 : 0.5 * (beta + beta_max);
      } else {
        beta_max = beta;
        beta = std::isinf(beta_min) ? beta * 0.5 : 0.5 * (beta + beta_min);
      }
    }

    double sum_p = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum_p += row[j];
    if (sum_p <= 0.0 || !std::isfinite(sum_p)) {
      // All pairwise distances vanished (duplicate points): uniform row.
      const double u = 1.0 / static_cast<double>(m - 1);
      for (std::size_t j = 0; j < m; ++j) row[j] = j == i ? 0.0 : u;
    } else {
      for (std::size_t j = 0; j < m; ++j) row[j] /= sum_p;
    }
  });

  Matrix p(m, m);
  const double norm = 1.0 / (2.0 * static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      p(i, j) = std::max((cond(i, j) + cond(j, i)) * norm, kPFloor);
    }
  return p;
}

Matrix tsne_q_matrix(const Matrix& y) {
  const std::size_t n = y.rows();
  Matrix t(n, n);
  const double sum = student_t_matrix(y, t);
  const double inv = 1.0 / sum;
  for (double& v : t.data()) v *= inv;
  return t;
}

double tsne_kl(const Matrix& p, const Matrix& y) {
  if (p.rows() != y.rows() || p.rows() != p.cols())
    throw ArgumentError("tsne_kl: shape mismatch");
  const std::size_t n = p.rows();
  Matrix t(n, n);
  const double sum_q = student_t_matrix(y, t);
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = p(i, j);
      if (pij <= 0.0) continue;
      const double qij =
          std::max(t(i, j) / sum_q, std::numeric_limits<double>::min());
      kl += pij * std::log(pij / qij);
    }
  return kl;
}

double tsne_step(const Matrix& p, Matrix& y, TsneState& state,
                 const TsneConfig& cfg) {
  const std::size_t n = y.rows(), r = y.cols();
  if (p.rows() != n || p.cols() != n) throw ArgumentError("tsne_step: P shape");
  if (state.velocity.rows() != n || state.velocity.cols() != r)
    state.velocity = Matrix(n, r);

  Matrix t(n, n);
  const double sum_q = student_t_matrix(y, t);
  const double inv_sum_q = 1.0 / sum_q;

  Matrix grad(n, r);
  parallel::for_each_index(n, [&](std::size_t i) {
    double* g = grad.row(i);
    const double* yi = y.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double mult = 4.0 * (p(i, j) - t(i, j) * inv_sum_q) * t(i, j);
      const double* yj = y.row(j);
      for (std::size_t c = 0; c < r; ++c) g[c] += mult * (yi[c] - yj[c]);
    }
  });
  for (double v : grad.data())
    if (!std::isfinite(v))
      throw NumericError("tsne: non-finite gradient at iteration " +
                         std::to_string(state.iter));

  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = p(i, j);
      if (pij <= 0.0) continue;
      const double qij =
          std::max(t(i, j) * inv_sum_q, std::numeric_limits<double>::min());
      kl += pij * std::log(pij / qij);
    }

  const double momentum = state.iter < cfg.momentum_switch
                              ? cfg.momentum_initial
                              : cfg.momentum_final;
  for (std::size_t idx = 0; idx < grad.data().size(); ++idx) {
    double& v = state.velocity.data()[idx];
    v = momentum * v - cfg.learning_rate * grad.data()[idx];
    y.data()[idx] += v;
  }
  ++state.iter;
  return kl;
}

Embedding embed_tsne(const Matrix& points, std::size_t r, const TsneConfig& cfg,
                     TsneReport* report) {
  const std::size_t m = points.rows();
  if (r == 0) throw ArgumentError("tsne: width must be positive");
  if (cfg.iters < 1) throw ArgumentError("tsne: need at least one iteration");

  double perplexity = cfg.perplexity;
  perplexity = std::min(perplexity, static_cast<double>(m - 1) / 3.0);
  perplexity = std::max(perplexity, 2.0);
  const Matrix p = tsne_p_matrix(points, perplexity);

  Matrix exaggerated = p;
  for (double& v : exaggerated.data()) v *= cfg.exaggeration;

  Matrix y(m, r);
  Rng rng(cfg.seed);
  for (double& v : y.data()) v = 1e-4 * rng.normal();

  const double initial_kl = tsne_kl(p, y);
  TsneState state;
  for (int it = 0; it < cfg.iters; ++it)
    tsne_step(it < cfg.exaggeration_iters ? exaggerated : p, y, state, cfg);
  const double final_kl = tsne_kl(p, y);

  if (report) {
    report->initial_kl = initial_kl;
    report->final_kl = final_kl;
    report->perplexity_used = perplexity;
  }

  Embedding out;
  out.coords = std::move(y);
  out.centered = false;
  return out;
}

}  // namespace imh

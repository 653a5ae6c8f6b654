#pragma once

#include <cstdint>

#include "imh/types.hpp"

namespace imh {

struct TsneConfig {
  double perplexity = 30.0;  // clamped to [2, (m-1)/3] by embed_tsne
  int iters = 1000;
  double learning_rate = 100.0;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch = 250;    // iteration where momentum switches
  double exaggeration = 4.0;    // early-exaggeration factor on P
  int exaggeration_iters = 100;
  std::uint64_t seed = 0;
};

// Symmetrized input similarities: per-row precisions found by bisection so
// each conditional row hits the target entropy log(perplexity) within 1e-5
// (at most 50 halvings), then P = (P_c + P_c^T) / (2m), zero diagonal,
// off-diagonal entries floored at 1e-12 after normalization. Rows whose
// pairwise distances are all zero become uniform conditionals.
Matrix tsne_p_matrix(const Matrix& points, double perplexity);

// Student-t similarities of a current layout (diagnostics and tests).
Matrix tsne_q_matrix(const Matrix& y);

// KL(p || q(y)), q floored at the smallest positive double.
double tsne_kl(const Matrix& p, const Matrix& y);

struct TsneState {
  Matrix velocity;  // same shape as y, starts at zero
  int iter = 0;
};

// One plain gradient-descent-with-momentum step on KL(p || q). Returns the
// divergence of the layout the gradient was computed at. A non-finite
// gradient raises NumericError naming the iteration.
double tsne_step(const Matrix& p, Matrix& y, TsneState& state,
                 const TsneConfig& cfg);

struct TsneReport {
  double initial_kl = 0.0;
  double final_kl = 0.0;
  double perplexity_used = 0.0;
};

// Full run: P matrix, seeded 1e-4 Gaussian init, early exaggeration for the
// first exaggeration_iters steps, momentum switch at momentum_switch.
Embedding embed_tsne(const Matrix& points, std::size_t r, const TsneConfig& cfg,
                     TsneReport* report = nullptr);

}  // namespace imh

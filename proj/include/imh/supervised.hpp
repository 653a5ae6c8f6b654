#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "imh/inductive.hpp"
#include "imh/types.hpp"

namespace imh {

struct LdaProjection {
  Matrix matrix;  // input width x r_out, generalized eigenvectors
  int classes = 0;
};

// Fisher discriminant directions of labelled embedded points: the top r_out
// solutions of S_b v = lambda (S_w + ridge) v, ridge =
// max(1e-6 trace(S_w)/width, 1e-12). Needs at least two classes and
// r_out <= classes - 1. Columns satisfy v^T (S_w + ridge) v = 1 and carry a
// fixed sign (dominant coordinate positive).
LdaProjection lda_fit(const Matrix& y, std::span<const int> class_of_row,
                      std::size_t r_out);

struct SupervisedConfig {
  std::size_t m_per_class = 100;
  std::size_t code_bits = 9;      // r_out; at most classes - 1
  std::size_t embed_width = 0;    // r_in; 0 means max(2 * code_bits, 16)
  Backend backend = Backend::tsne;
  int k = 5;
  double lambda = 2.0;
  std::optional<double> sigma;
  bool use_itq = false;
  int itq_iters = 50;
  std::uint64_t itq_seed = 0;
  KMeansConfig kmeans;
  TsneConfig tsne;
};

// Supervised variant: per-class base selection on the labelled sample, a
// wider unsupervised base embedding, then an LDA projection of the centered
// base embedding down to code_bits. The projection is stored in the model
// and applied inside encode.
HashModel imhs_train(const FeatureMatrix& labelled, const SupervisedConfig& cfg);

}  // namespace imh

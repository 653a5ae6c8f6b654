#pragma once

#include <span>
#include <vector>

#include "imh/types.hpp"

namespace imh {

// One k-sparse affinity row: weights against selected base centers, entries
// in ascending center index.
struct WeightRow {
  struct Entry {
    int index;
    double weight;
  };
  std::vector<Entry> entries;
  bool normalized = false;
};

// exp(-||a-b||^2 / sigma^2)
double gaussian_weight(std::span<const double> a, std::span<const double> b,
                       double sigma);

struct SigmaEstimate {
  double sigma;
  bool floored;  // mean squared distance fell below 1e-12
};

// sigma = sqrt(mean squared distance of training points to their nearest
// center). Falls back to 1e-6 (floored=true) when the mean vanishes, e.g.
// every point equals a center.
SigmaEstimate estimate_sigma(const BaseSet& base);

// Gaussian weights against the k nearest centers (squared Euclidean, ties
// to the lower center index).
WeightRow knn_base_weights(std::span<const double> x, const BaseSet& base,
                           int k, double sigma);

// Row sum normalization. When the sum underflows the row becomes uniform
// over its k entries, so downstream combinations stay well defined.
WeightRow normalize_row(WeightRow row);

// Everything the embeddings and the extension consume:
//   w_base   m x m symmetric Gaussian affinity, zero diagonal
//   d_base   row sums of w_base
//   w_xb     raw k-sparse rows, one per training point
//   wbar_xb  the same rows normalized
//   d_bx     column sums of w_xb (mass each center receives)
struct AffinityMatrices {
  Matrix w_base;
  std::vector<double> d_base;
  std::vector<WeightRow> w_xb;
  std::vector<WeightRow> wbar_xb;
  std::vector<double> d_bx;
};

AffinityMatrices build_affinities(const FeatureMatrix& x, const BaseSet& base,
                                  int k, double sigma);

// Just the m x m block and its row sums; enough for the base-only
// embeddings, which do not need the n x m rows.
Matrix base_affinity(const BaseSet& base, double sigma);

}  // namespace imh

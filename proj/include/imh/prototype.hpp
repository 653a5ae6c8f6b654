#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imh/matrix.hpp"
#include "imh/rng.hpp"

namespace imh {

// Covering clustering of embedded points used by the sampling analysis:
// k-means in the embedded space, epsilon = the largest distance from a
// point to its assigned center.
struct CoverClustering {
  Matrix centers;                        // m x r
  std::vector<int> assignment;           // cluster id per row
  std::vector<std::vector<int>> members; // ascending row ids per cluster
  double epsilon = 0.0;
};

CoverClustering cover_clusters(const Matrix& y, std::size_t clusters,
                               std::uint64_t seed);

// One randomized estimate of sum_i alpha_i y_i. Cluster j with mass
// C_j = sum of its alphas receives floor(m C_j + 1) i.i.d. draws taken
// within the cluster proportionally to alpha (none when C_j = 0); each
// cluster contributes (C_j / l_j) * sum of the drawn rows. The total draw
// budget never exceeds 2m; that bound is asserted.
struct PrototypeDraw {
  std::vector<std::size_t> draw_counts;  // l_j per cluster
  std::vector<int> drawn;                // sampled row ids, cluster-major
  std::vector<double> estimate;
};

PrototypeDraw prototype_estimate(std::span<const double> alpha, const Matrix& y,
                                 const CoverClustering& cover, Rng& rng);
PrototypeDraw prototype_estimate(std::span<const double> alpha, const Matrix& y,
                                 const CoverClustering& cover,
                                 std::uint64_t seed);

// Monte Carlo check of the estimator's guarantees on small synthetic
// instances: the estimate is unbiased (per-coordinate bias within 4
// standard errors) and its mean squared deviation stays below
// eps^2/clusters, with a 1 + 5/sqrt(trials) sampling allowance.
struct Lemma2Instance {
  std::size_t n = 200;
  std::size_t r = 4;
  std::size_t clusters = 16;
  std::uint64_t seed = 0;
};

struct Lemma2Row {
  Lemma2Instance instance;
  double epsilon = 0.0;
  double max_bias_over_se = 0.0;  // worst coordinate |bias| / standard error
  double mean_sq_err = 0.0;
  double variance_bound = 0.0;
  bool bias_ok = false;
  bool variance_ok = false;
};

struct Lemma2Report {
  std::vector<Lemma2Row> rows;
  std::size_t trials = 0;
  bool all_ok = false;
};

Lemma2Report validate_lemma2(std::span<const Lemma2Instance> instances,
                             std::size_t trials, std::uint64_t seed);

}  // namespace imh

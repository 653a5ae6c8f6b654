#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imh/types.hpp"

namespace imh {

struct KMeansConfig {
  std::size_t clusters = 400;
  int max_iters = 100;
  double rel_tol = 1e-6;  // stop when the relative cost drop falls below this
  std::uint64_t seed = 0;
  enum class Init { kmeanspp, random_points } init = Init::kmeanspp;
  enum class EmptyPolicy { reseed_farthest } empty_policy = EmptyPolicy::reseed_farthest;
};

struct ClusteringStats {
  int iterations = 0;
  double final_cost = 0.0;
  std::vector<double> cost_history;  // non-increasing
};

// Lloyd's algorithm with k-means++ seeding. Empty clusters are reseeded to
// the point currently farthest from its center, which cannot raise the
// objective. assign_dist holds the squared Euclidean distance of every row
// to its nearest final center.
BaseSet kmeans(const FeatureMatrix& x, const KMeansConfig& cfg,
               ClusteringStats* stats = nullptr);

// L1 variant: assignments by L1 distance, centers are coordinate-wise
// (lower) medians snapped to the nearest cluster member by L1 distance,
// ties to the lowest row index. An update that would raise the total L1
// cost is rolled back and the loop stops, keeping the history monotone.
// assign_dist is still squared Euclidean, as for every method.
BaseSet kmedians(const FeatureMatrix& x, const KMeansConfig& cfg,
                 ClusteringStats* stats = nullptr);

// `count` distinct rows drawn uniformly without replacement.
BaseSet random_sample(const FeatureMatrix& x, std::size_t count,
                      std::uint64_t seed);

// Independent k-means per class (ascending class id, seed offset by class
// id); centers are concatenated in class order and class_of_center is
// filled. Requires labels.
BaseSet per_class_kmeans(const FeatureMatrix& x, std::size_t per_class,
                         const KMeansConfig& cfg);
BaseSet per_class_kmeans(const FeatureMatrix& x,
                         std::span<const std::size_t> per_class,
                         const KMeansConfig& cfg);

}  // namespace imh

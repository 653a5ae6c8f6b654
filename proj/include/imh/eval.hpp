#pragma once

#include <span>
#include <vector>

#include "imh/types.hpp"

namespace imh {

// Popcount Hamming distance between two codes of equal width.
int hamming_distance(std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b);
int hamming_distance(const BinaryCodes& a, std::size_t i, const BinaryCodes& b,
                     std::size_t j);

// Database ids ordered by (distance to the query code, id). The secondary
// key makes the ranking total and deterministic.
std::vector<int> hamming_ranking(const BinaryCodes& db,
                                 std::span<const std::uint64_t> query,
                                 std::size_t bits);

// relevant[q] lists the database ids counted as correct for query q,
// strictly ascending.
struct GroundTruth {
  std::vector<std::vector<int>> relevant;
};

// Same-label pairs.
GroundTruth label_ground_truth(std::span<const int> db_labels,
                               std::span<const int> query_labels);

// The ceil(fraction * n) Euclidean nearest database rows per query, ties
// by ascending id.
GroundTruth euclidean_ground_truth(const Matrix& db, const Matrix& queries,
                                   double fraction);

// Area under the precision curve for one ranked list: the mean over the
// relevant positions p (1-based) of (relevant retrieved within p) / p.
double average_precision(std::span<const int> ranking,
                         std::span<const int> relevant_sorted);

struct PrPoint {
  std::size_t cutoff = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct LookupStats {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  double map = 0.0;
  std::size_t queries_used = 0;
  std::size_t queries_skipped = 0;  // queries with no relevant rows
  int radius = 0;
  LookupStats lookup;  // hash-lookup style retrieval within the radius
  std::vector<PrPoint> pr_curve;
};

// Full retrieval evaluation. Queries without relevant rows are skipped and
// counted. Lookup precision treats an empty result as precision 0. All
// per-query statistics are averaged in ascending query order.
MetricsReport evaluate(const BinaryCodes& db, const BinaryCodes& queries,
                       const GroundTruth& gt, int radius,
                       std::span<const std::size_t> cutoffs);

}  // namespace imh

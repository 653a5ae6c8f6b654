#include "imh/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "imh/kernels.hpp"
#include "imh/parallel.hpp"

namespace imh {

int hamming_distance(std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b) {
  if (a.size() != b.size())
    throw ArgumentError("hamming_distance: code length mismatch");
  int d = 0;
  for (std::size_t w = 0; w < a.size(); ++w) d += std::popcount(a[w] ^ b[w]);
  return d;
}

int hamming_distance(const BinaryCodes& a, std::size_t i, const BinaryCodes& b,
                     std::size_t j) {
  if (a.bits() != b.bits())
    throw ArgumentError("hamming_distance: code width mismatch");
  return hamming_distance(a.row_span(i), b.row_span(j));
}

std::vector<int> hamming_ranking(const BinaryCodes& db,
                                 std::span<const std::uint64_t> query,
                                 std::size_t bits) {
  if (bits != db.bits())
    throw ArgumentError("hamming_ranking: code width mismatch");
  // Counting sort over the bits+1 possible distances keeps the ranking
  // O(n) and naturally id-ordered inside each distance bucket.
  std::vector<std::vector<int>> buckets(bits + 1);
  for (std::size_t i = 0; i < db.size(); ++i) {
    const int d = hamming_distance(db.row_span(i), query);
    buckets[static_cast<std::size_t>(d)].push_back(static_cast<int>(i));
  }
  std::vector<int> ranking;
  ranking.reserve(db.size());
  for (const auto& bucket : buckets)
    ranking.insert(ranking.end(), bucket.begin(), bucket.end());
  return ranking;
}

GroundTruth label_ground_truth(std::span<const int> db_labels,
                               std::span<const int> query_labels) {
  if (db_labels.empty() || query_labels.empty())
    throw ArgumentError("label_ground_truth: labels required on both sides");
  GroundTruth gt;
  gt.relevant.resize(query_labels.size());
  for (std::size_t q = 0; q < query_labels.size(); ++q)
    for (std::size_t i = 0; i < db_labels.size(); ++i)
      if (db_labels[i] == query_labels[q])
        gt.relevant[q].push_back(static_cast<int>(i));
  return gt;
}

GroundTruth euclidean_ground_truth(const Matrix& db, const Matrix& queries,
                                   double fraction) {
  if (db.cols() != queries.cols())
    throw ArgumentError("euclidean_ground_truth: dimension mismatch");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ArgumentError("euclidean_ground_truth: fraction outside (0, 1]");
  const std::size_t n = db.rows();
  const auto count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n)));

  GroundTruth gt;
  gt.relevant.resize(queries.rows());
  parallel::for_each_index(queries.rows(), [&](std::size_t q) {
    std::vector<std::pair<double, int>> dist(n);
    for (std::size_t i = 0; i < n; ++i)
      dist[i] = {kernels::squared_distance(queries.row(q), db.row(i), db.cols()),
                 static_cast<int>(i)};
    std::nth_element(dist.begin(), dist.begin() + (count - 1), dist.end());
    std::vector<int>& rel = gt.relevant[q];
    rel.resize(count);
    for (std::size_t t = 0; t < count; ++t) rel[t] = dist[t].second;
    std::sort(rel.begin(), rel.end());
  });
  return gt;
}

double average_precision(std::span<const int> ranking,
                         std::span<const int> relevant_sorted) {
  if (relevant_sorted.empty())
    throw ArgumentError("average_precision: no relevant items");
  double ap = 0.0;
  std::size_t hits = 0;
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
    if (std::binary_search(relevant_sorted.begin(), relevant_sorted.end(),
                           ranking[pos])) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  return ap / static_cast<double>(relevant_sorted.size());
}

MetricsReport evaluate(const BinaryCodes& db, const BinaryCodes& queries,
                       const GroundTruth& gt, int radius,
                       std::span<const std::size_t> cutoffs) {
  if (gt.relevant.size() != queries.size())
    throw ArgumentError("evaluate: one relevance list per query required");
  if (db.bits() != queries.bits())
    throw ArgumentError("evaluate: code width mismatch");
  if (radius < 0) throw ArgumentError("evaluate: negative radius");

  const std::size_t nq = queries.size();
  struct PerQuery {
    double ap = 0.0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    std::vector<std::size_t> hits_at;  // relevant found within each cutoff
    bool used = false;
  };
  std::vector<PerQuery> stats(nq);

  parallel::for_each_index(nq, [&](std::size_t q) {
    const std::vector<int>& rel = gt.relevant[q];
    if (rel.empty()) return;
    PerQuery& s = stats[q];
    s.used = true;

    const std::vector<int> ranking =
        hamming_ranking(db, queries.row_span(q), queries.bits());
    s.ap = average_precision(ranking, rel);

    std::size_t retrieved = 0, retrieved_relevant = 0;
    for (std::size_t i = 0; i < db.size(); ++i) {
      if (hamming_distance(db, i, queries, q) > radius) continue;
      ++retrieved;
      if (std::binary_search(rel.begin(), rel.end(), static_cast<int>(i)))
        ++retrieved_relevant;
    }
    if (retrieved > 0)
      s.precision = static_cast<double>(retrieved_relevant) /
                    static_cast<double>(retrieved);
    s.recall = static_cast<double>(retrieved_relevant) /
               static_cast<double>(rel.size());
    if (s.precision + s.recall > 0.0)
      s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);

    s.hits_at.resize(cutoffs.size(), 0);
    for (std::size_t t = 0; t < cutoffs.size(); ++t) {
      const std::size_t cut = std::min(cutoffs[t], ranking.size());
      std::size_t hits = 0;
      for (std::size_t pos = 0; pos < cut; ++pos)
        if (std::binary_search(rel.begin(), rel.end(), ranking[pos])) ++hits;
      s.hits_at[t] = hits;
    }
  });

  MetricsReport report;
  report.radius = radius;
  report.pr_curve.resize(cutoffs.size());
  for (std::size_t t = 0; t < cutoffs.size(); ++t)
    report.pr_curve[t].cutoff = cutoffs[t];

  for (std::size_t q = 0; q < nq; ++q) {
    const PerQuery& s = stats[q];
    if (!s.used) {
      ++report.queries_skipped;
      continue;
    }
    ++report.queries_used;
    report.map += s.ap;
    report.lookup.precision += s.precision;
    report.lookup.recall += s.recall;
    report.lookup.f1 += s.f1;
    for (std::size_t t = 0; t < cutoffs.size(); ++t) {
      const std::size_t cut = std::min(cutoffs[t], db.size());
      report.pr_curve[t].precision +=
          static_cast<double>(s.hits_at[t]) / static_cast<double>(cut);
      report.pr_curve[t].recall += static_cast<double>(s.hits_at[t]) /
                                   static_cast<double>(gt.relevant[q].size());
    }
  }
  if (report.queries_used == 0)
    throw ArgumentError("evaluate: every query had an empty relevance list");

  const double used = static_cast<double>(report.queries_used);
  report.map /= used;
  report.lookup.precision /= used;
  report.lookup.recall /= used;
  report.lookup.f1 /= used;
  for (PrPoint& p : report.pr_curve) {
    p.precision /= used;
    p.recall /= used;
  }
  return report;
}

}  // namespace imh

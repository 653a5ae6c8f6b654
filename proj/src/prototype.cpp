#include "imh/prototype.hpp"

#include <algorithm>
#include <cmath>

#include "imh/base_select.hpp"
#include "imh/kernels.hpp"

namespace imh {

CoverClustering cover_clusters(const Matrix& y, std::size_t clusters,
                               std::uint64_t seed) {
  if (y.rows() == 0) throw ArgumentError("cover_clusters: empty input");
  FeatureMatrix as_features;
  as_features.data = y;

  KMeansConfig cfg;
  cfg.clusters = clusters;
  cfg.seed = seed;
  const BaseSet base = kmeans(as_features, cfg);

  CoverClustering cover;
  cover.centers = base.centers;
  cover.assignment.resize(y.rows());
  std::vector<double> dist(y.rows());
  kernels::assign_nearest(y, cover.centers, cover.assignment, dist);
  cover.members.resize(clusters);
  for (std::size_t i = 0; i < y.rows(); ++i)
    cover.members[static_cast<std::size_t>(cover.assignment[i])].push_back(
        static_cast<int>(i));
  double worst = 0.0;
  for (double d : dist) worst = std::max(worst, d);
  cover.epsilon = std::sqrt(worst);
  return cover;
}

PrototypeDraw prototype_estimate(std::span<const double> alpha, const Matrix& y,
                                 const CoverClustering& cover, Rng& rng) {
  const std::size_t n = y.rows(), r = y.cols();
  const std::size_t m = cover.members.size();
  if (alpha.size() != n)
    throw ArgumentError("prototype_estimate: weight count differs from rows");
  double total = 0.0;
  for (double a : alpha) {
    if (a < 0.0 || !std::isfinite(a))
      throw ArgumentError("prototype_estimate: weights must be non-negative");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ArgumentError("prototype_estimate: weights must sum to 1");

  PrototypeDraw out;
  out.draw_counts.resize(m, 0);
  out.estimate.assign(r, 0.0);

  std::size_t total_draws = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& members = cover.members[j];
    double mass = 0.0;
    std::vector<double> prefix(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) {
      mass += alpha[static_cast<std::size_t>(members[t])];
      prefix[t] = mass;
    }
    if (mass <= 0.0) continue;  // zero-mass cluster draws nothing

    const auto draws = static_cast<std::size_t>(
        std::floor(static_cast<double>(m) * mass + 1.0));
    out.draw_counts[j] = draws;
    total_draws += draws;

    const double scale = mass / static_cast<double>(draws);
    for (std::size_t t = 0; t < draws; ++t) {
      const double target = rng.uniform01() * mass;
      const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
      const std::size_t pick = std::min(
          static_cast<std::size_t>(it - prefix.begin()), members.size() - 1);
      const int row = members[pick];
      out.drawn.push_back(row);
      const double* yr = y.row(static_cast<std::size_t>(row));
      for (std::size_t c = 0; c < r; ++c) out.estimate[c] += scale * yr[c];
    }
  }

  if (total_draws > 2 * m)
    throw NumericError("prototype_estimate: draw budget exceeded 2m");
  return out;
}

PrototypeDraw prototype_estimate(std::span<const double> alpha, const Matrix& y,
                                 const CoverClustering& cover,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return prototype_estimate(alpha, y, cover, rng);
}

Lemma2Report validate_lemma2(std::span<const Lemma2Instance> instances,
                             std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw ArgumentError("validate_lemma2: need at least 2 trials");

  Lemma2Report report;
  report.trials = trials;
  report.all_ok = true;

  for (const Lemma2Instance& inst : instances) {
    Rng data_rng(inst.seed);
    Matrix y(inst.n, inst.r);
    for (double& v : y.data()) v = data_rng.normal();
    std::vector<double> alpha(inst.n);
    double total = 0.0;
    for (double& a : alpha) {
      a = data_rng.uniform01() + 1e-3;
      total += a;
    }
    for (double& a : alpha) a /= total;

    const CoverClustering cover = cover_clusters(y, inst.clusters, inst.seed);

    std::vector<double> target(inst.r, 0.0);
    for (std::size_t i = 0; i < inst.n; ++i)
      for (std::size_t c = 0; c < inst.r; ++c) target[c] += alpha[i] * y(i, c);

    std::vector<double> sum(inst.r, 0.0), sum_sq(inst.r, 0.0);
    double mean_sq_err = 0.0;
    Rng draw_rng(seed ^ inst.seed);
    for (std::size_t t = 0; t < trials; ++t) {
      const PrototypeDraw draw = prototype_estimate(alpha, y, cover, draw_rng);
      double sq = 0.0;
      for (std::size_t c = 0; c < inst.r; ++c) {
        sum[c] += draw.estimate[c];
        sum_sq[c] += draw.estimate[c] * draw.estimate[c];
        const double dev = draw.estimate[c] - target[c];
        sq += dev * dev;
      }
      mean_sq_err += sq;
    }
    mean_sq_err /= static_cast<double>(trials);

    Lemma2Row row;
    row.instance = inst;
    row.epsilon = cover.epsilon;
    for (std::size_t c = 0; c < inst.r; ++c) {
      const double mean = sum[c] / static_cast<double>(trials);
      const double var = std::max(
          sum_sq[c] / static_cast<double>(trials) - mean * mean, 0.0);
      const double se =
          std::sqrt(var / static_cast<double>(trials));
      const double bias = std::abs(mean - target[c]);
      const double ratio = bias < 1e-12 ? 0.0 : bias / std::max(se, 1e-300);
      row.max_bias_over_se = std::max(row.max_bias_over_se, ratio);
    }
    row.mean_sq_err = mean_sq_err;
    row.variance_bound =
        cover.epsilon * cover.epsilon / static_cast<double>(inst.clusters) *
        (1.0 + 5.0 / std::sqrt(static_cast<double>(trials)));
    row.bias_ok = row.max_bias_over_se <= 4.0;
    row.variance_ok = row.mean_sq_err <= row.variance_bound;
    report.all_ok = report.all_ok && row.bias_ok && row.variance_ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace imh

#include "imh/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imh/kernels.hpp"
#include "imh/parallel.hpp"

namespace imh {

namespace {
constexpr double kSigmaFloorThreshold = 1e-12;
constexpr double kSigmaFloor = 1e-6;
constexpr double kRowUnderflow = 1e-300;
}  // namespace

double gaussian_weight(std::span<const double> a, std::span<const double> b,
                       double sigma) {
  if (a.size() != b.size())
    throw ArgumentError("gaussian_weight: dimension mismatch");
  if (!(sigma > 0.0)) throw ArgumentError("gaussian_weight: sigma must be positive");
  const double d2 = kernels::squared_distance(a.data(), b.data(), a.size());
  return std::exp(-d2 / (sigma * sigma));
}

SigmaEstimate estimate_sigma(const BaseSet& base) {
  if (base.assign_dist.empty())
    throw ArgumentError("estimate_sigma: base set has no assignment distances");
  const double mean = kernels::reduce_sum(base.assign_dist) /
                      static_cast<double>(base.assign_dist.size());
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw NumericError("estimate_sigma: invalid mean distance");
  if (mean < kSigmaFloorThreshold) return {kSigmaFloor, true};
  return {std::sqrt(mean), false};
}

WeightRow knn_base_weights(std::span<const double> x, const BaseSet& base,
                           int k, double sigma) {
  const std::size_t m = base.size();
  if (x.size() != base.dim())
    throw ArgumentError("knn_base_weights: dimension mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > m)
    throw ArgumentError("knn_base_weights: k outside [1, m]");
  if (!(sigma > 0.0))
    throw ArgumentError("knn_base_weights: sigma must be positive");

  std::vector<std::pair<double, int>> dist(m);
  for (std::size_t c = 0; c < m; ++c)
    dist[c] = {kernels::squared_distance(x.data(), base.centers.row(c), x.size()),
               static_cast<int>(c)};
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());

  WeightRow row;
  row.entries.resize(static_cast<std::size_t>(k));
  std::sort(dist.begin(), dist.begin() + k,
            [](const auto& a, const auto& b) { return a.second < b.second; });
  const double s2 = sigma * sigma;
  for (int t = 0; t < k; ++t)
    row.entries[static_cast<std::size_t>(t)] = {dist[t].second,
                                                std::exp(-dist[t].first / s2)};
  return row;
}

WeightRow normalize_row(WeightRow row) {
  if (row.entries.empty()) throw ArgumentError("normalize_row: empty row");
  double sum = 0.0;
  for (const auto& e : row.entries) sum += e.weight;
  if (sum < kRowUnderflow) {
    const double uniform = 1.0 / static_cast<double>(row.entries.size());
    for (auto& e : row.entries) e.weight = uniform;
  } else {
    for (auto& e : row.entries) e.weight /= sum;
  }
  row.normalized = true;
  return row;
}

Matrix base_affinity(const BaseSet& base, double sigma) {
  if (!(sigma > 0.0)) throw ArgumentError("base_affinity: sigma must be positive");
  const std::size_t m = base.size(), d = base.dim();
  Matrix w(m, m);
  const double s2 = sigma * sigma;
  parallel::for_each_index(m, [&](std::size_t i) {
    double* row = w.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d2 =
          kernels::squared_distance(base.centers.row(i), base.centers.row(j), d);
      row[j] = std::exp(-d2 / s2);
    }
  });
  return w;
}

AffinityMatrices build_affinities(const FeatureMatrix& x, const BaseSet& base,
                                  int k, double sigma) {
  if (x.dim() != base.dim())
    throw ArgumentError("build_affinities: dimension mismatch");
  const std::size_t n = x.size(), m = base.size();

  AffinityMatrices aff;
  aff.w_base = base_affinity(base, sigma);
  aff.d_base.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    const double* row = aff.w_base.row(i);
    for (std::size_t j = 0; j < m; ++j) s += row[j];
    aff.d_base[i] = s;
  }

  aff.w_xb.resize(n);
  aff.wbar_xb.resize(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    aff.w_xb[i] = knn_base_weights(x.data.row_span(i), base, k, sigma);
    aff.wbar_xb[i] = normalize_row(aff.w_xb[i]);
  });

  // Column sums of w_xb with the fixed chunk grid, so the accumulation
  // order is independent of the thread count.
  const std::size_t chunks = parallel::chunk_count(n);
  std::vector<double> partial(chunks * m, 0.0);
  parallel::for_each_chunk(n, [&](std::size_t c, std::size_t b, std::size_t e) {
    double* acc = partial.data() + c * m;
    for (std::size_t i = b; i < e; ++i)
      for (const auto& entry : aff.w_xb[i].entries)
        acc[static_cast<std::size_t>(entry.index)] += entry.weight;
  });
  aff.d_bx.assign(m, 0.0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < m; ++j) aff.d_bx[j] += partial[c * m + j];

  return aff;
}

}  // namespace imh

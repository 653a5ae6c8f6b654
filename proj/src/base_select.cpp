#include "imh/base_select.hpp"

#include <algorithm>
#include <numeric>

#include "imh/kernels.hpp"
#include "imh/parallel.hpp"
#include "imh/rng.hpp"

namespace imh {

namespace {

std::vector<std::size_t> distinct_indices(std::size_t count, std::size_t n,
                                          Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_below(n - i);
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  return order;
}

Matrix rows_at(const Matrix& x, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(x.row(idx[i]), x.cols(), out.row(i));
  return out;
}

// k-means++: first center uniform, then each next center drawn with
// probability proportional to the squared distance to the nearest chosen
// center. Distances update incrementally.
Matrix kmeanspp_init(const Matrix& x, std::size_t m, Rng& rng) {
  const std::size_t n = x.rows(), d = x.cols();
  Matrix centers(m, d);
  std::vector<double> d2(n);

  std::size_t first = rng.uniform_below(n);
  std::copy_n(x.row(first), d, centers.row(0));
  parallel::for_each_index(n, [&](std::size_t i) {
    d2[i] = kernels::squared_distance(x.row(i), centers.row(0), d);
  });

  for (std::size_t c = 1; c < m; ++c) {
    const double total = kernels::reduce_sum(d2);
    std::size_t pick;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_below(n);  // all remaining mass zero (duplicates)
    }
    std::copy_n(x.row(pick), d, centers.row(c));
    parallel::for_each_index(n, [&](std::size_t i) {
      const double dc = kernels::squared_distance(x.row(i), centers.row(c), d);
      if (dc < d2[i]) d2[i] = dc;
    });
  }
  return centers;
}

void check_cluster_args(const FeatureMatrix& x, std::size_t m) {
  x.validate();
  if (m == 0) throw ArgumentError("clustering: need at least one center");
  if (m > x.size())
    throw ArgumentError("clustering: more centers than data points");
}

// Reseed empty clusters (ascending cluster id) to the point farthest from
// its assigned center, then refresh the assignment. The moved center had no
// members, so no point loses its current option and the cost cannot rise.
template <class Assign>
void fix_empty_clusters(const Matrix& x, Matrix& centers,
                        std::span<int> assign, std::span<double> dist,
                        Assign assign_all) {
  const std::size_t m = centers.rows();
  std::vector<std::size_t> count(m, 0);
  for (int a : assign) ++count[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < m; ++c) {
    if (count[c] > 0) continue;
    std::size_t far = 0;
    for (std::size_t i = 1; i < x.rows(); ++i)
      if (dist[i] > dist[far]) far = i;
    std::copy_n(x.row(far), x.cols(), centers.row(c));
    assign_all();
    count.assign(m, 0);
    for (int a : assign) ++count[static_cast<std::size_t>(a)];
  }
}

// Per-cluster mean over members in ascending row order; parallel across
// clusters, so the summation order never depends on the thread count.
void mean_update(const Matrix& x, std::span<const int> assign, Matrix& centers) {
  const std::size_t d = x.cols();
  parallel::for_each_index(centers.rows(), [&](std::size_t c) {
    double* center = centers.row(c);
    std::fill_n(center, d, 0.0);
    std::size_t members = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (static_cast<std::size_t>(assign[i]) != c) continue;
      const double* row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) center[j] += row[j];
      ++members;
    }
    if (members > 0)
      for (std::size_t j = 0; j < d; ++j) center[j] /= static_cast<double>(members);
  });
}

// Coordinate-wise lower median of each cluster, snapped to the member with
// the smallest L1 distance to that median point (ties to the lowest row).
void median_update(const Matrix& x, std::span<const int> assign, Matrix& centers) {
  const std::size_t d = x.cols();
  parallel::for_each_index(centers.rows(), [&](std::size_t c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < x.rows(); ++i)
      if (static_cast<std::size_t>(assign[i]) == c) members.push_back(i);
    if (members.empty()) return;

    std::vector<double> median(d), column(members.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t t = 0; t < members.size(); ++t)
        column[t] = x(members[t], j);
      const std::size_t mid = (members.size() - 1) / 2;
      std::nth_element(column.begin(), column.begin() + mid, column.end());
      median[j] = column[mid];
    }

    std::size_t best = members[0];
    double best_dist = kernels::l1_distance(x.row(best), median.data(), d);
    for (std::size_t t = 1; t < members.size(); ++t) {
      const double dist = kernels::l1_distance(x.row(members[t]), median.data(), d);
      if (dist < best_dist) {
        best_dist = dist;
        best = members[t];
      }
    }
    std::copy_n(x.row(best), d, centers.row(c));
  });
}

void finish_stats(ClusteringStats* stats, int iters,
                  std::vector<double> history) {
  if (!stats) return;
  stats->iterations = iters;
  stats->final_cost = history.empty() ? 0.0 : history.back();
  stats->cost_history = std::move(history);
}

}  // namespace

BaseSet kmeans(const FeatureMatrix& x, const KMeansConfig& cfg,
               ClusteringStats* stats) {
  check_cluster_args(x, cfg.clusters);
  const std::size_t n = x.size(), m = cfg.clusters;
  Rng rng(cfg.seed);

  Matrix centers = cfg.init == KMeansConfig::Init::kmeanspp
                       ? kmeanspp_init(x.data, m, rng)
                       : rows_at(x.data, distinct_indices(m, n, rng));

  std::vector<int> assign(n);
  std::vector<double> dist(n);
  auto e_step = [&] { kernels::assign_nearest(x.data, centers, assign, dist); };

  std::vector<double> history;
  e_step();
  fix_empty_clusters(x.data, centers, assign, dist, e_step);
  double cost = kernels::reduce_sum(dist);
  history.push_back(cost);

  int iters = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    mean_update(x.data, assign, centers);
    e_step();
    fix_empty_clusters(x.data, centers, assign, dist, e_step);
    const double next = kernels::reduce_sum(dist);
    history.push_back(next);
    ++iters;
    if (cost - next <= cfg.rel_tol * cost) break;
    cost = next;
  }
  finish_stats(stats, iters, std::move(history));

  BaseSet base;
  base.centers = std::move(centers);
  base.method = BaseMethod::kmeans;
  base.assign_dist = std::move(dist);
  return base;
}

BaseSet kmedians(const FeatureMatrix& x, const KMeansConfig& cfg,
                 ClusteringStats* stats) {
  check_cluster_args(x, cfg.clusters);
  const std::size_t n = x.size(), m = cfg.clusters;
  Rng rng(cfg.seed);

  Matrix centers = cfg.init == KMeansConfig::Init::kmeanspp
                       ? kmeanspp_init(x.data, m, rng)
                       : rows_at(x.data, distinct_indices(m, n, rng));

  std::vector<int> assign(n);
  std::vector<double> dist(n);
  auto e_step = [&] { kernels::assign_nearest_l1(x.data, centers, assign, dist); };

  std::vector<double> history;
  e_step();
  fix_empty_clusters(x.data, centers, assign, dist, e_step);
  double cost = kernels::reduce_sum(dist);
  history.push_back(cost);

  int iters = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    // Snapping to a member can raise the objective; keep the previous state
    // and stop when that happens so the accepted history stays monotone.
    const Matrix saved_centers = centers;
    const std::vector<int> saved_assign = assign;
    const std::vector<double> saved_dist = dist;

    median_update(x.data, assign, centers);
    e_step();
    fix_empty_clusters(x.data, centers, assign, dist, e_step);
    const double next = kernels::reduce_sum(dist);
    if (next > cost) {
      centers = saved_centers;
      assign = saved_assign;
      dist = saved_dist;
      break;
    }
    history.push_back(next);
    ++iters;
    if (cost - next <= cfg.rel_tol * cost) break;
    cost = next;
  }
  finish_stats(stats, iters, std::move(history));

  BaseSet base;
  base.centers = std::move(centers);
  base.method = BaseMethod::kmedians;
  base.assign_dist.resize(n);
  std::vector<int> l2_assign(n);
  kernels::assign_nearest(x.data, base.centers, l2_assign, base.assign_dist);
  return base;
}

BaseSet random_sample(const FeatureMatrix& x, std::size_t count,
                      std::uint64_t seed) {
  check_cluster_args(x, count);
  Rng rng(seed);
  BaseSet base;
  base.centers = rows_at(x.data, distinct_indices(count, x.size(), rng));
  base.method = BaseMethod::random_sample;
  base.assign_dist.resize(x.size());
  std::vector<int> assign(x.size());
  kernels::assign_nearest(x.data, base.centers, assign, base.assign_dist);
  return base;
}

BaseSet per_class_kmeans(const FeatureMatrix& x, std::size_t per_class,
                         const KMeansConfig& cfg) {
  if (!x.has_labels()) throw ArgumentError("per-class k-means: labels required");
  const std::vector<std::size_t> counts(
      static_cast<std::size_t>(x.label_count()), per_class);
  return per_class_kmeans(x, counts, cfg);
}

BaseSet per_class_kmeans(const FeatureMatrix& x,
                         std::span<const std::size_t> per_class,
                         const KMeansConfig& cfg) {
  x.validate();
  if (!x.has_labels()) throw ArgumentError("per-class k-means: labels required");
  const std::size_t classes = static_cast<std::size_t>(x.label_count());
  if (per_class.size() != classes)
    throw ArgumentError("per-class k-means: one center count per class required");

  BaseSet base;
  base.method = BaseMethod::per_class_kmeans;
  std::vector<Matrix> blocks;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x.labels[i] == static_cast<int>(c)) idx.push_back(i);
    if (per_class[c] == 0 || per_class[c] > idx.size())
      throw ArgumentError("per-class k-means: class " + std::to_string(c) +
                          " has " + std::to_string(idx.size()) +
                          " points for " + std::to_string(per_class[c]) +
                          " centers");

    FeatureMatrix subset;
    subset.data = rows_at(x.data, idx);
    KMeansConfig sub_cfg = cfg;
    sub_cfg.clusters = per_class[c];
    sub_cfg.seed = cfg.seed + c;
    BaseSet part = kmeans(subset, sub_cfg);
    blocks.push_back(std::move(part.centers));
    base.class_of_center.insert(base.class_of_center.end(), per_class[c],
                                static_cast<int>(c));
  }

  std::size_t total = 0;
  for (const Matrix& b : blocks) total += b.rows();
  base.centers = Matrix(total, x.dim());
  std::size_t at = 0;
  for (const Matrix& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++at)
      std::copy_n(b.row(i), x.dim(), base.centers.row(at));

  base.assign_dist.resize(x.size());
  std::vector<int> assign(x.size());
  kernels::assign_nearest(x.data, base.centers, assign, base.assign_dist);
  return base;
}

}  // namespace imh

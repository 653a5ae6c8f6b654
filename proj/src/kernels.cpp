#include "imh/kernels.hpp"

#include "imh/parallel.hpp"

namespace imh::kernels {

double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

double l1_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += std::abs(a[j] - b[j]);
  return s;
}

namespace {

template <double Dist(const double*, const double*, std::size_t)>
void nearest_row(const Matrix& x, const Matrix& centers, std::size_t i,
                 int& index, double& dist) {
  const double* xi = x.row(i);
  const std::size_t d = x.cols();
  int best = 0;
  double best_dist = Dist(xi, centers.row(0), d);
  for (std::size_t c = 1; c < centers.rows(); ++c) {
    const double dc = Dist(xi, centers.row(c), d);
    if (dc < best_dist) {
      best_dist = dc;
      best = static_cast<int>(c);
    }
  }
  index = best;
  dist = best_dist;
}

void check_assign_args(const Matrix& x, const Matrix& centers,
                       std::span<int> out_index, std::span<double> out_dist) {
  if (centers.rows() == 0) throw ArgumentError("assign_nearest: no centers");
  if (x.cols() != centers.cols())
    throw ArgumentError("assign_nearest: dimension mismatch");
  if (out_index.size() != x.rows() || out_dist.size() != x.rows())
    throw ArgumentError("assign_nearest: output size mismatch");
}

}  // namespace

void assign_nearest(const Matrix& x, const Matrix& centers,
                    std::span<int> out_index, std::span<double> out_dist) {
  check_assign_args(x, centers, out_index, out_dist);
  parallel::for_each_index(x.rows(), [&](std::size_t i) {
    nearest_row<squared_distance>(x, centers, i, out_index[i], out_dist[i]);
  });
}

void assign_nearest_l1(const Matrix& x, const Matrix& centers,
                       std::span<int> out_index, std::span<double> out_dist) {
  check_assign_args(x, centers, out_index, out_dist);
  parallel::for_each_index(x.rows(), [&](std::size_t i) {
    nearest_row<l1_distance>(x, centers, i, out_index[i], out_dist[i]);
  });
}

double reduce_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> partial(parallel::chunk_count(n), 0.0);
  parallel::for_each_chunk(n, [&](std::size_t c, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += values[i];
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

std::vector<double> column_means(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0) throw ArgumentError("column_means: empty matrix");
  const std::size_t chunks = parallel::chunk_count(rows);
  std::vector<double> partial(chunks * cols, 0.0);
  parallel::for_each_chunk(rows, [&](std::size_t c, std::size_t b, std::size_t e) {
    double* acc = partial.data() + c * cols;
    for (std::size_t i = b; i < e; ++i) {
      const double* ri = m.row(i);
      for (std::size_t j = 0; j < cols; ++j) acc[j] += ri[j];
    }
  });
  std::vector<double> mean(cols, 0.0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < cols; ++j) mean[j] += partial[c * cols + j];
  for (double& v : mean) v /= static_cast<double>(rows);
  return mean;
}

namespace serial {

void assign_nearest(const Matrix& x, const Matrix& centers,
                    std::span<int> out_index, std::span<double> out_dist) {
  check_assign_args(x, centers, out_index, out_dist);
  for (std::size_t i = 0; i < x.rows(); ++i)
    nearest_row<squared_distance>(x, centers, i, out_index[i], out_dist[i]);
}

void assign_nearest_l1(const Matrix& x, const Matrix& centers,
                       std::span<int> out_index, std::span<double> out_dist) {
  check_assign_args(x, centers, out_index, out_dist);
  for (std::size_t i = 0; i < x.rows(); ++i)
    nearest_row<l1_distance>(x, centers, i, out_index[i], out_dist[i]);
}

double reduce_sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

std::vector<double> column_means(const Matrix& m) {
  if (m.rows() == 0) throw ArgumentError("column_means: empty matrix");
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* ri = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += ri[j];
  }
  for (double& v : mean) v /= static_cast<double>(m.rows());
  return mean;
}

}  // namespace serial

}  // namespace imh::kernels

#pragma once

#include <cstdint>
#include <vector>

#include "imh/matrix.hpp"
#include "imh/rng.hpp"
#include "imh/types.hpp"

namespace imh::test {

// Well separated 3-D Gaussian blobs, one label per blob. Blob b sits at
// distance 10*(b+1) from the origin along a cycling axis, so any number of
// blobs stays pairwise separated by at least 10 units.
inline FeatureMatrix make_blobs(std::size_t per_blob, std::size_t blob_count,
                                double spread, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = 3;
  FeatureMatrix out;
  out.data = Matrix(per_blob * blob_count, d);
  out.labels.resize(out.data.rows());
  for (std::size_t b = 0; b < blob_count; ++b) {
    std::vector<double> center(d, 0.0);
    center[b % d] = 10.0 * static_cast<double>(b + 1);
    for (std::size_t i = 0; i < per_blob; ++i) {
      const std::size_t row = b * per_blob + i;
      for (std::size_t j = 0; j < d; ++j)
        out.data(row, j) = center[j] + spread * rng.normal();
      out.labels[row] = static_cast<int>(b);
    }
  }
  return out;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = scale * rng.normal();
  return m;
}

inline std::vector<double> column_means_of(const Matrix& m) {
  std::vector<double> means(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) means[j] += m(i, j);
  for (double& v : means) v /= static_cast<double>(m.rows());
  return means;
}

}  // namespace imh::test

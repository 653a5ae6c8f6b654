#include "imh/embeddings.hpp"

#include <cmath>

#include "eigen_util.hpp"
#include "imh/eigen_solve.hpp"
#include "imh/kernels.hpp"

namespace imh {

std::vector<double> center_columns(Matrix& m) {
  std::vector<double> means = kernels::column_means(m);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] -= means[j];
  }
  return means;
}

namespace {

void check_embed_width(std::size_t r, std::size_t m) {
  if (r == 0) throw ArgumentError("embedding: width must be positive");
  if (r >= m)
    throw ArgumentError("embedding: width must be below the center count");
}

Matrix laplacian(const Matrix& w) {
  const std::size_t m = w.rows();
  Matrix l(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      degree += w(i, j);
      l(i, j) = -w(i, j);
    }
    l(i, i) += degree;
  }
  return l;
}

}  // namespace

Embedding embed_le_base(const Matrix& w_base, std::size_t r) {
  if (w_base.rows() != w_base.cols())
    throw ArgumentError("le_base: affinity matrix not square");
  const std::size_t m = w_base.rows();
  check_embed_width(r, m);

  const SymEigenResult eig = smallest_eigenvectors(laplacian(w_base), r, true);

  Embedding out;
  out.coords = eig.vectors;
  center_columns(out.coords);
  for (std::size_t j = 0; j < r; ++j) {
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      var += out.coords(i, j) * out.coords(i, j);
    var /= static_cast<double>(m);
    if (var < 1e-24)
      throw NumericError("le_base: degenerate embedding direction");
    const double inv_std = 1.0 / std::sqrt(var);
    for (std::size_t i = 0; i < m; ++i) out.coords(i, j) *= inv_std;
  }
  out.centered = true;
  return out;
}

Embedding embed_le_relaxed(const AffinityMatrices& aff, double lambda,
                           std::size_t r) {
  const std::size_t m = aff.w_base.rows();
  check_embed_width(r, m);
  if (lambda < 0.0) throw ArgumentError("le_relaxed: lambda must be >= 0");
  if (aff.d_bx.size() != m)
    throw ArgumentError("le_relaxed: affinity block sizes disagree");

  // M = D_B - W_B
  Matrix objective = laplacian(aff.w_base);

  // T = D_BX - Wbar^T W, accumulated from the k-sparse rows. Serial over
  // the n rows: k^2 work per row, negligible and order-fixed.
  Matrix t(m, m);
  for (std::size_t j = 0; j < m; ++j) t(j, j) = aff.d_bx[j];
  for (std::size_t i = 0; i < aff.w_xb.size(); ++i) {
    const auto& raw = aff.w_xb[i].entries;
    const auto& bar = aff.wbar_xb[i].entries;
    for (const auto& a : bar)
      for (const auto& b : raw)
        t(static_cast<std::size_t>(a.index), static_cast<std::size_t>(b.index)) -=
            a.weight * b.weight;
  }

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      objective(i, j) += lambda * 0.5 * (t(i, j) + t(j, i));

  const SymEigenResult eig = smallest_eigenvectors(objective, r, true);

  Embedding out;
  out.coords = eig.vectors;
  const double root_m = std::sqrt(static_cast<double>(m));
  for (double& v : out.coords.data()) v *= root_m;
  center_columns(out.coords);
  out.centered = true;
  return out;
}

Embedding embed_pca(const Matrix& points, std::size_t r) {
  const std::size_t m = points.rows(), d = points.cols();
  if (m < 2) throw ArgumentError("pca: need at least two points");
  if (r == 0 || r > std::min(m, d))
    throw ArgumentError("pca: width outside [1, min(m, d)]");

  Matrix centered = points;
  center_columns(centered);

  Eigen::MatrixXd b = eig::to_eigen(centered);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
  Eigen::MatrixXd loadings = svd.matrixV().leftCols(static_cast<Eigen::Index>(r));
  eig::fix_column_signs(loadings);

  Embedding out;
  out.coords = eig::from_eigen(b * loadings);
  out.centered = true;
  return out;
}

}  // namespace imh

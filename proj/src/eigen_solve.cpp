#include "imh/eigen_solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigen_util.hpp"
#include "imh/errors.hpp"

namespace imh {

SymEigenResult smallest_eigenvectors(const Matrix& a, std::size_t q,
                                     bool drop_trivial) {
  if (a.rows() != a.cols()) throw ArgumentError("eigensolve: matrix not square");
  const std::size_t m = a.rows();
  if (q == 0 || q > m) throw ArgumentError("eigensolve: q outside [1, m]");
  if (!all_finite(a)) throw NumericError("eigensolve: non-finite input");

  const double scale = std::max(1.0, max_abs(a) * static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale)
        throw ArgumentError("eigensolve: input is not symmetric");

  Eigen::MatrixXd sym = eig::to_eigen(a);
  sym = ((sym + sym.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolve: iteration failed to converge");

  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  Eigen::MatrixXd vectors = solver.eigenvectors();
  eig::fix_column_signs(vectors);

  const double zero_eps = 1e-8 * scale;
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (drop_trivial && values[j] < zero_eps) {
      const double cos_ones =
          std::abs(vectors.col(j).sum()) * inv_sqrt_m / vectors.col(j).norm();
      if (cos_ones > 0.99) continue;
    }
    keep.push_back(j);
  }
  if (keep.size() < q)
    throw ArgumentError("eigensolve: fewer than q non-trivial eigenvectors");

  // Stable order: ascending eigenvalue, ties (within 1e-12 * scale) by the
  // row index of the dominant coordinate.
  auto dominant_row = [&](Eigen::Index j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < vectors.rows(); ++i)
      if (std::abs(vectors(i, j)) > std::abs(vectors(best, j))) best = i;
    return best;
  };
  const double tie_eps = 1e-12 * scale;
  std::stable_sort(keep.begin(), keep.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (std::abs(values[x] - values[y]) > tie_eps) return values[x] < values[y];
    return dominant_row(x) < dominant_row(y);
  });

  SymEigenResult result;
  result.values.resize(q);
  result.vectors = Matrix(m, q);
  for (std::size_t col = 0; col < q; ++col) {
    const Eigen::Index j = keep[col];
    result.values[col] = values[j];
    for (std::size_t i = 0; i < m; ++i)
      result.vectors(i, col) = vectors(static_cast<Eigen::Index>(i), j);
  }
  return result;
}

double max_principal_angle(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows())
    throw ArgumentError("principal angle: row count mismatch");
  if (u.cols() == 0 || v.cols() == 0)
    throw ArgumentError("principal angle: empty basis");

  auto orthonormalize = [](const Matrix& m) {
    const Eigen::MatrixXd e = eig::to_eigen(m);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
    Eigen::MatrixXd q = qr.householderQ();
    return Eigen::MatrixXd(q.leftCols(e.cols()));
  };
  const Eigen::MatrixXd qu = orthonormalize(u);
  const Eigen::MatrixXd qv = orthonormalize(v);

  // sin(theta_max) = largest singular value of (I - Qu Qu^T) Qv
  const Eigen::MatrixXd residual = qv - qu * (qu.transpose() * qv);
  const double s = residual.jacobiSvd().singularValues()(0);
  return std::asin(std::clamp(s, 0.0, 1.0));
}

}  // namespace imh

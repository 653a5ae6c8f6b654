#include "imh/itq.hpp"

#include "eigen_util.hpp"
#include "imh/errors.hpp"
#include "imh/rng.hpp"

namespace imh {

namespace {
constexpr double kRelImprovementStop = 1e-7;

Eigen::MatrixXd sign_codes(const Eigen::MatrixXd& v) {
  return v.unaryExpr([](double x) { return x > 0.0 ? 1.0 : -1.0; });
}
}  // namespace

ItqResult itq_rotation(const Matrix& y, int iters, std::uint64_t seed,
                       ItqInit init) {
  const std::size_t n = y.rows(), r = y.cols();
  if (n == 0 || r == 0) throw ArgumentError("itq: empty embedding");
  if (iters < 1) throw ArgumentError("itq: need at least one round");
  if (!all_finite(y)) throw NumericError("itq: non-finite embedding");

  const Eigen::MatrixXd ye = eig::to_eigen(y);
  Rng rng(seed);
  Eigen::MatrixXd rotation =
      init == ItqInit::identity
          ? Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(r))
          : eig::random_orthogonal(r, rng);

  ItqResult result;
  Eigen::MatrixXd v = ye * rotation;
  Eigen::MatrixXd b = sign_codes(v);
  double error = (b - v).squaredNorm();
  result.error_history.push_back(error);
  result.iterations = 0;

  for (int it = 0; it < iters; ++it) {
    // Procrustes: with codes fixed, the best rotation comes from the SVD of
    // B^T Y. Both alternation halves can only lower the error.
    const Eigen::MatrixXd m = b.transpose() * ye;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    rotation = svd.matrixV() * svd.matrixU().transpose();

    v = ye * rotation;
    b = sign_codes(v);
    const double next = (b - v).squaredNorm();
    if (!std::isfinite(next)) throw NumericError("itq: non-finite error");
    result.error_history.push_back(next);
    ++result.iterations;
    if (error - next <= kRelImprovementStop * error) {
      error = next;
      break;
    }
    error = next;
  }

  result.rotation = eig::from_eigen(rotation);
  result.final_error = error;
  return result;
}

}  // namespace imh

#include "imh/supervised.hpp"

#include <algorithm>

#include "eigen_util.hpp"
#include "imh/affinity.hpp"
#include "imh/embeddings.hpp"
#include "imh/itq.hpp"
#include "imh/kernels.hpp"
#include "imh/tsne.hpp"

namespace imh {

LdaProjection lda_fit(const Matrix& y, std::span<const int> class_of_row,
                      std::size_t r_out) {
  const std::size_t n = y.rows(), width = y.cols();
  if (class_of_row.size() != n)
    throw ArgumentError("lda_fit: one class id per row required");
  if (n == 0 || width == 0) throw ArgumentError("lda_fit: empty input");

  int classes = 0;
  for (int c : class_of_row) {
    if (c < 0) throw ArgumentError("lda_fit: negative class id");
    classes = std::max(classes, c + 1);
  }
  if (classes < 2) throw ArgumentError("lda_fit: need at least two classes");
  if (r_out == 0 || r_out > static_cast<std::size_t>(classes - 1))
    throw ArgumentError("lda_fit: r_out outside [1, classes - 1]");
  if (r_out > width)
    throw ArgumentError("lda_fit: r_out exceeds the input width");

  const Eigen::MatrixXd ye = eig::to_eigen(y);
  const Eigen::VectorXd global_mean = ye.colwise().mean();

  Eigen::MatrixXd s_w = Eigen::MatrixXd::Zero(ye.cols(), ye.cols());
  Eigen::MatrixXd s_b = Eigen::MatrixXd::Zero(ye.cols(), ye.cols());
  for (int c = 0; c < classes; ++c) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (class_of_row[i] == c) rows.push_back(static_cast<Eigen::Index>(i));
    if (rows.empty())
      throw ArgumentError("lda_fit: class " + std::to_string(c) + " is empty");

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(ye.cols());
    for (Eigen::Index i : rows) mean += ye.row(i).transpose();
    mean /= static_cast<double>(rows.size());

    for (Eigen::Index i : rows) {
      const Eigen::VectorXd dev = ye.row(i).transpose() - mean;
      s_w += dev * dev.transpose();
    }
    const Eigen::VectorXd gap = mean - global_mean;
    s_b += static_cast<double>(rows.size()) * gap * gap.transpose();
  }

  const double ridge =
      std::max(1e-6 * s_w.trace() / static_cast<double>(width), 1e-12);
  s_w += ridge * Eigen::MatrixXd::Identity(ye.cols(), ye.cols());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      s_b, s_w, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw NumericError("lda_fit: generalized eigensolve failed");

  // Eigenvalues ascend; the discriminant directions are the top r_out.
  Eigen::MatrixXd top(ye.cols(), static_cast<Eigen::Index>(r_out));
  for (std::size_t j = 0; j < r_out; ++j)
    top.col(static_cast<Eigen::Index>(j)) =
        solver.eigenvectors().col(ye.cols() - 1 - static_cast<Eigen::Index>(j));
  eig::fix_column_signs(top);

  LdaProjection out;
  out.matrix = eig::from_eigen(top);
  out.classes = classes;
  if (!all_finite(out.matrix))
    throw NumericError("lda_fit: non-finite projection");
  return out;
}

HashModel imhs_train(const FeatureMatrix& labelled, const SupervisedConfig& cfg) {
  labelled.validate();
  if (!labelled.has_labels())
    throw ArgumentError("imhs_train: labelled data required");
  if (cfg.code_bits == 0)
    throw ArgumentError("imhs_train: code_bits must be positive");

  const std::size_t width =
      cfg.embed_width ? cfg.embed_width : std::max<std::size_t>(2 * cfg.code_bits, 16);
  if (width < cfg.code_bits)
    throw ArgumentError("imhs_train: embed_width below code_bits");

  TrainConfig base_cfg;
  base_cfg.base_method = BaseMethod::per_class_kmeans;
  base_cfg.backend = cfg.backend;
  base_cfg.m_per_class = cfg.m_per_class;
  base_cfg.k = cfg.k;
  base_cfg.bits = width;
  base_cfg.lambda = cfg.lambda;
  base_cfg.sigma = cfg.sigma;
  base_cfg.use_itq = false;
  base_cfg.kmeans = cfg.kmeans;
  base_cfg.tsne = cfg.tsne;
  HashModel model = train(labelled, base_cfg);

  Matrix centered = model.base_embedding.coords;
  for (std::size_t i = 0; i < centered.rows(); ++i)
    for (std::size_t j = 0; j < centered.cols(); ++j)
      centered(i, j) -= model.embedding_means[j];

  const LdaProjection lda =
      lda_fit(centered, model.base.class_of_center, cfg.code_bits);
  model.projection = lda.matrix;

  if (cfg.use_itq) {
    const Eigen::MatrixXd projected =
        eig::to_eigen(centered) * eig::to_eigen(model.projection);
    model.rotation =
        itq_rotation(eig::from_eigen(projected), cfg.itq_iters, cfg.itq_seed)
            .rotation;
  }
  model.validate();
  return model;
}

}  // namespace imh

#include "imh/baselines.hpp"

#include <cstring>

#include "eigen_util.hpp"
#include "imh/embeddings.hpp"
#include "imh/parallel.hpp"
#include "imh/rng.hpp"
#include "io_bytes.hpp"

namespace imh {

namespace {
constexpr char kLinearMagic[4] = {'I', 'M', 'H', 'L'};
}

void LinearHashModel::validate() const {
  if (projection.rows() == 0 || projection.cols() == 0)
    throw FormatError("linear model: empty projection");
  if (!all_finite(projection))
    throw FormatError("linear model: non-finite projection");
  if (bias.size() != projection.cols())
    throw FormatError("linear model: bias count differs from bit count");
  for (double b : bias)
    if (!std::isfinite(b)) throw FormatError("linear model: non-finite bias");
}

LinearHashModel pcah_train(const FeatureMatrix& x, std::size_t bits) {
  x.validate();
  if (bits == 0 || bits > std::min(x.size(), x.dim()))
    throw ArgumentError("pcah_train: bits outside [1, min(n, d)]");

  Matrix centered = x.data;
  const std::vector<double> mean = center_columns(centered);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(eig::to_eigen(centered),
                                     Eigen::ComputeThinV);
  Eigen::MatrixXd loadings =
      svd.matrixV().leftCols(static_cast<Eigen::Index>(bits));
  eig::fix_column_signs(loadings);

  LinearHashModel model;
  model.kind = LinearKind::pca_hash;
  model.projection = eig::from_eigen(loadings);
  model.bias.resize(bits);
  // Thresholding at the mean: bias_b = (column b) . mean.
  for (std::size_t b = 0; b < bits; ++b) {
    double dot = 0.0;
    for (std::size_t j = 0; j < x.dim(); ++j)
      dot += model.projection(j, b) * mean[j];
    model.bias[b] = dot;
  }
  return model;
}

LinearHashModel lsh_train(std::size_t dim, std::size_t bits,
                          std::uint64_t seed) {
  if (dim == 0 || bits == 0)
    throw ArgumentError("lsh_train: dim and bits must be positive");
  LinearHashModel model;
  model.kind = LinearKind::random_hyperplane;
  model.projection = Matrix(dim, bits);
  Rng rng(seed);
  for (double& v : model.projection.data()) v = rng.normal();
  model.bias.assign(bits, 0.0);
  return model;
}

BinaryCodes linear_encode(const FeatureMatrix& x, const LinearHashModel& model) {
  model.validate();
  if (x.dim() != model.projection.rows())
    throw ArgumentError("linear_encode: dimension mismatch");
  const std::size_t bits = model.projection.cols();
  Matrix values(x.size(), bits);
  parallel::for_each_index(x.size(), [&](std::size_t i) {
    const double* row = x.data.row(i);
    double* out = values.row(i);
    for (std::size_t b = 0; b < bits; ++b) out[b] = -model.bias[b];
    for (std::size_t j = 0; j < x.dim(); ++j) {
      const double v = row[j];
      const double* proj_row = model.projection.row(j);
      for (std::size_t b = 0; b < bits; ++b) out[b] += v * proj_row[b];
    }
  });
  return BinaryCodes::from_signs(values);
}

void save_linear(const LinearHashModel& model, std::ostream& out) {
  model.validate();
  out.write(kLinearMagic, 4);
  bytes::write_u8(out, static_cast<std::uint8_t>(model.kind));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.projection.rows()));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.projection.cols()));
  for (double v : model.projection.data()) bytes::write_f64(out, v);
  for (double v : model.bias) bytes::write_f64(out, v);
  bytes::check_written(out, "linear model");
}

void save_linear(const LinearHashModel& model,
                 const std::filesystem::path& path) {
  auto out = bytes::open_output(path);
  save_linear(model, out);
}

LinearHashModel load_linear(std::istream& in) {
  char got[4];
  bytes::read_exact(in, got, 4, "magic");
  if (std::memcmp(got, kLinearMagic, 4) != 0)
    throw FormatError("linear model file: bad magic");
  LinearHashModel model;
  const auto kind = bytes::read_u8(in, "kind");
  if (kind > 1) throw FormatError("linear model file: unknown kind");
  model.kind = static_cast<LinearKind>(kind);
  const std::size_t d = bytes::read_u32(in, "dimension");
  const std::size_t bits = bytes::read_u32(in, "bit count");
  if (d == 0 || bits == 0)
    throw FormatError("linear model file: zero dimension in header");
  model.projection = Matrix(d, bits);
  for (double& v : model.projection.data())
    v = bytes::read_f64(in, "projection");
  model.bias.resize(bits);
  for (double& v : model.bias) v = bytes::read_f64(in, "bias");
  bytes::expect_eof(in, "linear model file");
  model.validate();
  return model;
}

LinearHashModel load_linear(const std::filesystem::path& path) {
  auto in = bytes::open_input(path);
  return load_linear(in);
}

}  // namespace imh

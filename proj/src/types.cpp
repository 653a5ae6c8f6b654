#include "imh/types.hpp"

#include <algorithm>

namespace imh {

int FeatureMatrix::label_count() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

void FeatureMatrix::validate() const {
  if (data.rows() == 0) throw FormatError("feature matrix: no rows");
  if (data.cols() == 0) throw FormatError("feature matrix: no columns");
  if (!all_finite(data)) throw FormatError("feature matrix: non-finite value");
  if (!labels.empty()) {
    if (labels.size() != data.rows())
      throw FormatError("feature matrix: label count differs from row count");
    for (int l : labels)
      if (l < 0) throw FormatError("feature matrix: negative label");
  }
}

void BaseSet::validate() const {
  if (centers.rows() == 0) throw FormatError("base set: no centers");
  if (centers.cols() == 0) throw FormatError("base set: no columns");
  if (!all_finite(centers)) throw FormatError("base set: non-finite center");
  if (!assign_dist.empty()) {
    for (double d : assign_dist)
      if (!(d >= 0.0) || !std::isfinite(d))
        throw FormatError("base set: invalid assignment distance");
  }
  if (!class_of_center.empty() && class_of_center.size() != centers.rows())
    throw FormatError("base set: class list length differs from center count");
}

void Embedding::validate() const {
  if (coords.rows() == 0) throw FormatError("embedding: no rows");
  if (coords.cols() == 0) throw FormatError("embedding: no columns");
  if (!all_finite(coords)) throw FormatError("embedding: non-finite coordinate");
}

BinaryCodes::BinaryCodes(std::size_t count, std::size_t bits)
    : count_(count), bits_(bits), words_((bits + 63) / 64) {
  if (bits == 0) throw ArgumentError("binary codes: bits must be positive");
  data_.assign(count_ * words_, 0);
}

BinaryCodes BinaryCodes::from_signs(const Matrix& y) {
  BinaryCodes codes(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const double* row = y.row(i);
    std::uint64_t* out = codes.row(i);
    for (std::size_t b = 0; b < y.cols(); ++b)
      if (row[b] > 0.0) out[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return codes;
}

void BinaryCodes::set_bit(std::size_t i, std::size_t b, bool v) {
  if (b >= bits_) throw ArgumentError("binary codes: bit index out of range");
  std::uint64_t& w = data_[i * words_ + b / 64];
  const std::uint64_t mask = std::uint64_t{1} << (b % 64);
  if (v)
    w |= mask;
  else
    w &= ~mask;
}

bool BinaryCodes::pad_bits_zero() const {
  const std::size_t pad = words_ * 64 - bits_;
  if (pad == 0 || count_ == 0) return true;
  const std::uint64_t mask = ~std::uint64_t{0} << (64 - pad);
  for (std::size_t i = 0; i < count_; ++i)
    if (row(i)[words_ - 1] & mask) return false;
  return true;
}

double orthogonality_residual(const Matrix& r) {
  if (r.rows() != r.cols()) throw ArgumentError("orthogonality: not square");
  const std::size_t n = r.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < n; ++t) dot += r(t, i) * r(t, j);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

void HashModel::validate() const {
  base.validate();
  base_embedding.validate();
  if (base_embedding.size() != base.size())
    throw FormatError("model: embedding row count differs from center count");
  if (embedding_means.size() != embed_dim())
    throw FormatError("model: embedding mean count differs from embedding width");
  for (double m : embedding_means)
    if (!std::isfinite(m)) throw FormatError("model: non-finite embedding mean");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw FormatError("model: sigma must be positive");
  if (k < 1 || static_cast<std::size_t>(k) > base.size())
    throw FormatError("model: k outside [1, m]");
  if (has_projection()) {
    if (projection.rows() != embed_dim())
      throw FormatError("model: projection row count differs from embedding width");
    if (projection.cols() == 0 || !all_finite(projection))
      throw FormatError("model: invalid projection");
  }
  if (has_rotation()) {
    if (rotation.rows() != code_bits() || rotation.cols() != code_bits())
      throw FormatError("model: rotation shape differs from code width");
    if (!all_finite(rotation)) throw FormatError("model: non-finite rotation");
    if (orthogonality_residual(rotation) > 1e-8)
      throw FormatError("model: rotation is not orthogonal");
  }
}

std::string to_string(BaseMethod m) {
  switch (m) {
    case BaseMethod::random_sample: return "random";
    case BaseMethod::kmedians: return "kmedians";
    case BaseMethod::kmeans: return "kmeans";
    case BaseMethod::per_class_kmeans: return "per_class_kmeans";
  }
  throw ArgumentError("unknown base method");
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::le_base: return "le_base";
    case Backend::le_relaxed: return "le_relaxed";
    case Backend::tsne: return "tsne";
    case Backend::pca: return "pca";
  }
  throw ArgumentError("unknown backend");
}

BaseMethod base_method_from_string(const std::string& s) {
  if (s == "random") return BaseMethod::random_sample;
  if (s == "kmedians") return BaseMethod::kmedians;
  if (s == "kmeans") return BaseMethod::kmeans;
  if (s == "per_class_kmeans") return BaseMethod::per_class_kmeans;
  throw ArgumentError("unknown base method: " + s);
}

Backend backend_from_string(const std::string& s) {
  if (s == "le_base") return Backend::le_base;
  if (s == "le_relaxed") return Backend::le_relaxed;
  if (s == "tsne") return Backend::tsne;
  if (s == "pca") return Backend::pca;
  throw ArgumentError("unknown backend: " + s);
}

}  // namespace imh

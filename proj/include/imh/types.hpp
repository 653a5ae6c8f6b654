#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imh/matrix.hpp"

namespace imh {

// Dataset in memory: n x d features plus optional integer labels.
struct FeatureMatrix {
  Matrix data;
  std::vector<int> labels;  // empty when unlabelled, else one per row

  std::size_t size() const { return data.rows(); }
  std::size_t dim() const { return data.cols(); }
  bool has_labels() const { return !labels.empty(); }

  // Number of classes t; labels must lie in [0, t).
  int label_count() const;

  // Throws FormatError when structural invariants are violated.
  void validate() const;
};

enum class BaseMethod : std::uint8_t {
  random_sample = 0,
  kmedians = 1,
  kmeans = 2,
  per_class_kmeans = 3,
};

enum class Backend : std::uint8_t {
  le_base = 0,
  le_relaxed = 1,
  tsne = 2,
  pca = 3,
};

std::string to_string(BaseMethod m);
std::string to_string(Backend b);
BaseMethod base_method_from_string(const std::string& s);
Backend backend_from_string(const std::string& s);

// Base set produced by base selection: m centers in the input space.
struct BaseSet {
  Matrix centers;  // m x d
  BaseMethod method = BaseMethod::kmeans;
  // Squared Euclidean distance from each training point to its nearest
  // center; filled by every selection method, consumed by sigma estimation.
  std::vector<double> assign_dist;
  // Class id per center; only set by per_class_kmeans.
  std::vector<int> class_of_center;

  std::size_t size() const { return centers.rows(); }
  std::size_t dim() const { return centers.cols(); }
  void validate() const;
};

// Low-dimensional coordinates, one row per point.
struct Embedding {
  Matrix coords;
  bool centered = false;  // columns have zero mean

  std::size_t size() const { return coords.rows(); }
  std::size_t dim() const { return coords.cols(); }
  void validate() const;
};

// Packed binary codes: one row of ceil(bits/64) words per point,
// little-endian bit order within a row (bit b lives in word b/64 at b%64).
// Pad bits beyond `bits` are always zero.
class BinaryCodes {
 public:
  BinaryCodes() = default;
  BinaryCodes(std::size_t count, std::size_t bits);

  // bit j of row i = (y(i, j) > 0); sign(0) maps to 0.
  static BinaryCodes from_signs(const Matrix& y);

  std::size_t size() const { return count_; }
  std::size_t bits() const { return bits_; }
  std::size_t words_per_row() const { return words_; }

  std::uint64_t* row(std::size_t i) { return words_ ? &data_[i * words_] : nullptr; }
  const std::uint64_t* row(std::size_t i) const { return &data_[i * words_]; }
  std::span<const std::uint64_t> row_span(std::size_t i) const {
    return {row(i), words_};
  }

  bool bit(std::size_t i, std::size_t b) const {
    return (data_[i * words_ + b / 64] >> (b % 64)) & 1u;
  }
  void set_bit(std::size_t i, std::size_t b, bool v);

  std::vector<std::uint64_t>& data() { return data_; }
  const std::vector<std::uint64_t>& data() const { return data_; }

  bool pad_bits_zero() const;
  bool operator==(const BinaryCodes&) const = default;

 private:
  std::size_t count_ = 0;
  std::size_t bits_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

// Everything needed to hash unseen points. Produced by train/imhs_train,
// persisted by save_model/load_model.
struct HashModel {
  BaseSet base;
  Embedding base_embedding;            // m x r_embed backend coordinates
  std::vector<double> embedding_means; // column means, subtracted at encode time
  double sigma = 1.0;
  int k = 5;                           // neighbors used by the extension
  Backend backend = Backend::tsne;
  Matrix projection;  // r_embed x r_code supervised projection, may be empty
  Matrix rotation;    // r_code x r_code orthogonal rotation, may be empty

  bool has_projection() const { return !projection.empty(); }
  bool has_rotation() const { return !rotation.empty(); }
  std::size_t embed_dim() const { return base_embedding.dim(); }
  std::size_t code_bits() const {
    return has_projection() ? projection.cols() : embed_dim();
  }
  void validate() const;
};

// Off-by-eps orthogonality check used by model validation and tests.
double orthogonality_residual(const Matrix& r);

}  // namespace imh

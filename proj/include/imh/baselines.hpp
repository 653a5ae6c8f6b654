#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "imh/types.hpp"

namespace imh {

enum class LinearKind : std::uint8_t {
  pca_hash = 0,          // PCA directions thresholded at the data mean
  random_hyperplane = 1, // seeded Gaussian directions, zero threshold
};

// Shared shape for the linear baselines: bit b of x is
// (projection column b) . x - bias_b > 0.
struct LinearHashModel {
  LinearKind kind = LinearKind::pca_hash;
  Matrix projection;         // d x bits
  std::vector<double> bias;  // one threshold per bit
  void validate() const;
};

LinearHashModel pcah_train(const FeatureMatrix& x, std::size_t bits);
LinearHashModel lsh_train(std::size_t dim, std::size_t bits,
                          std::uint64_t seed);
BinaryCodes linear_encode(const FeatureMatrix& x, const LinearHashModel& model);

// "IMHL" container, same conventions as the model file.
void save_linear(const LinearHashModel& model, std::ostream& out);
void save_linear(const LinearHashModel& model, const std::filesystem::path& path);
LinearHashModel load_linear(std::istream& in);
LinearHashModel load_linear(const std::filesystem::path& path);

}  // namespace imh

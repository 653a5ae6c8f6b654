#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imh/base_select.hpp"
#include "imh/tsne.hpp"
#include "imh/types.hpp"

namespace imh {

// Out-of-sample extension: the embedding of a new point is the
// normalized-weight combination of the base embeddings of its k nearest
// centers. Returns raw backend coordinates; encode subtracts the stored
// column means before thresholding.
std::vector<double> extend_embedding(std::span<const double> x,
                                     const HashModel& model);

// Batch extension, one row per input point. Identical arithmetic to the
// per-point path, just parallel across rows.
Embedding extend_all(const FeatureMatrix& x, const HashModel& model);

// bit = coordinate > 0 (a zero coordinate gives bit 0).
BinaryCodes binarize(const Embedding& y);

// Full pipeline per row: extend, subtract column means, apply the
// supervised projection and the rotation when present, threshold.
BinaryCodes encode(const FeatureMatrix& x, const HashModel& model);
std::vector<std::uint64_t> encode_point(std::span<const double> x,
                                        const HashModel& model);

struct TrainConfig {
  BaseMethod base_method = BaseMethod::kmeans;
  Backend backend = Backend::tsne;
  std::size_t m = 400;   // base set size
  int k = 5;             // neighbors for the extension
  std::size_t bits = 64; // embedding width = code width (no projection here)
  double lambda = 2.0;   // relaxed LE coupling strength
  std::optional<double> sigma;  // kernel width; estimated when unset
  bool use_itq = false;
  int itq_iters = 50;
  std::uint64_t itq_seed = 0;
  std::size_t m_per_class = 0;  // required for per_class_kmeans
  KMeansConfig kmeans;          // clusters/seed taken from here
  TsneConfig tsne;
};

struct TrainReport {
  double base_seconds = 0.0;
  double embed_seconds = 0.0;
  double sigma = 0.0;
  bool sigma_floored = false;
  TsneReport tsne;  // filled for the tsne backend
};

// Training: select the base set, estimate the kernel width, embed the
// centers with the chosen backend, record the embedding column means, and
// optionally learn an ITQ rotation on the centered base embedding.
HashModel train(const FeatureMatrix& x, const TrainConfig& cfg,
                TrainReport* report = nullptr);

}  // namespace imh

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>

#include "imh/types.hpp"

namespace imh {

// IDX image/label pair (the MNIST container format). Big-endian headers,
// u8 payloads; pixels are scaled to [0, 1]. Image and label counts must
// match.
FeatureMatrix load_idx(const std::filesystem::path& images,
                       const std::filesystem::path& labels);

// .fvecs: per record a little-endian i32 dimension followed by that many
// f32 values. Every record must share one dimension. `limit` caps the
// number of records read.
FeatureMatrix load_fvecs(const std::filesystem::path& path,
                         std::optional<std::size_t> limit = std::nullopt);

// .bvecs: same framing with u8 payloads, kept unscaled (0..255).
FeatureMatrix load_bvecs(const std::filesystem::path& path,
                         std::optional<std::size_t> limit = std::nullopt);

// Strict numeric CSV: comma-separated doubles, equal column counts. Blank
// and '#'-prefixed lines are skipped. With has_labels the last column is an
// integral class id. Parse failures report the 1-based line number.
FeatureMatrix load_csv(const std::filesystem::path& path, bool has_labels);

// Deterministic disjoint split: a seeded permutation of [0, n) is drawn,
// the first test_count permuted rows become the test set, the rest the
// training set, both in permuted order. Labels follow their rows.
std::pair<FeatureMatrix, FeatureMatrix> split_train_test(
    const FeatureMatrix& all, std::size_t test_count, std::uint64_t seed);

}  // namespace imh

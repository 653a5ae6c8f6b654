#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "imh/rng.hpp"
#include "imh/types.hpp"

namespace imh::test {

// Labelled points along a random closed curve in a high-dimensional space.
// Each coordinate is a cosine of the latent parameter t in [0,1) with its
// own frequency and phase, so no single linear direction orders the curve,
// while short arcs stay smooth. Classes are consecutive arc segments and
// every class skews its samples toward one end of its segment with its own
// exponent, which varies the sampling density along the curve.
struct ManifoldSpec {
  std::size_t db_rows = 10000;
  std::size_t query_rows = 500;
  std::size_t dim = 64;
  int classes = 10;
  double min_cycles = 2.0;   // lowest coordinate frequency over the full curve
  double max_cycles = 10.0;  // highest
  double noise = 0.08;       // per-coordinate Gaussian jitter
  std::uint64_t seed = 101;
};

struct ManifoldData {
  FeatureMatrix db;
  FeatureMatrix queries;
};

inline ManifoldData make_manifold(const ManifoldSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t d = spec.dim;

  std::vector<double> freq(d), phase(d), amp(d);
  for (std::size_t j = 0; j < d; ++j) {
    freq[j] = spec.min_cycles + (spec.max_cycles - spec.min_cycles) * rng.uniform01();
    phase[j] = 2.0 * std::numbers::pi * rng.uniform01();
    amp[j] = 0.6 + 0.8 * rng.uniform01();
  }

  const auto fill = [&](FeatureMatrix& out, std::size_t rows) {
    out.data = Matrix(rows, d);
    out.labels.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const int c = static_cast<int>(i % spec.classes);
      const double skew = 0.5 + 1.5 * ((c * 7) % spec.classes) /
                                    static_cast<double>(spec.classes - 1);
      const double u = std::pow(rng.uniform01(), skew);
      const double t = (c + u) / spec.classes;
      double* row = out.data.row(i);
      for (std::size_t j = 0; j < d; ++j)
        row[j] = amp[j] * std::cos(2.0 * std::numbers::pi * freq[j] * t + phase[j]) +
                 spec.noise * rng.normal();
      out.labels[i] = c;
    }
  };

  ManifoldData data;
  fill(data.db, spec.db_rows);
  fill(data.queries, spec.query_rows);
  return data;
}

}  // namespace imh::test

#include "imh/inductive.hpp"

#include <chrono>
#include <cmath>

#include "imh/affinity.hpp"
#include "imh/embeddings.hpp"
#include "imh/itq.hpp"
#include "imh/kernels.hpp"
#include "imh/parallel.hpp"

namespace imh {

namespace {

// Shared per-point arithmetic for the single and batch paths: identical
// operation order, so their outputs agree bit for bit.
void extend_into(std::span<const double> x, const HashModel& model,
                 double* out) {
  const WeightRow bar =
      normalize_row(knn_base_weights(x, model.base, model.k, model.sigma));
  const std::size_t r = model.embed_dim();
  std::fill_n(out, r, 0.0);
  for (const auto& e : bar.entries) {
    const double* base_row =
        model.base_embedding.coords.row(static_cast<std::size_t>(e.index));
    for (std::size_t c = 0; c < r; ++c) out[c] += e.weight * base_row[c];
  }
}

// extend -> center -> project -> rotate, writing code_bits values.
void encode_coords(std::span<const double> x, const HashModel& model,
                   double* scratch_embed, double* out) {
  const std::size_t r = model.embed_dim();
  extend_into(x, model, scratch_embed);
  for (std::size_t c = 0; c < r; ++c) scratch_embed[c] -= model.embedding_means[c];

  const std::size_t bits = model.code_bits();
  const double* coords = scratch_embed;
  std::vector<double> projected;
  if (model.has_projection()) {
    projected.assign(bits, 0.0);
    for (std::size_t c = 0; c < r; ++c) {
      const double v = scratch_embed[c];
      const double* proj_row = model.projection.row(c);
      for (std::size_t b = 0; b < bits; ++b) projected[b] += v * proj_row[b];
    }
    coords = projected.data();
  }

  if (model.has_rotation()) {
    std::fill_n(out, bits, 0.0);
    for (std::size_t c = 0; c < bits; ++c) {
      const double v = coords[c];
      const double* rot_row = model.rotation.row(c);
      for (std::size_t b = 0; b < bits; ++b) out[b] += v * rot_row[b];
    }
  } else {
    std::copy_n(coords, bits, out);
  }
}

void check_input(const FeatureMatrix& x, const HashModel& model,
                 const char* who) {
  if (x.dim() != model.base.dim())
    throw ArgumentError(std::string(who) + ": dimension mismatch");
}

}  // namespace

std::vector<double> extend_embedding(std::span<const double> x,
                                     const HashModel& model) {
  if (x.size() != model.base.dim())
    throw ArgumentError("extend_embedding: dimension mismatch");
  std::vector<double> out(model.embed_dim());
  extend_into(x, model, out.data());
  return out;
}

Embedding extend_all(const FeatureMatrix& x, const HashModel& model) {
  check_input(x, model, "extend_all");
  Embedding out;
  out.coords = Matrix(x.size(), model.embed_dim());
  parallel::for_each_index(x.size(), [&](std::size_t i) {
    extend_into(x.data.row_span(i), model, out.coords.row(i));
  });
  out.centered = false;
  return out;
}

BinaryCodes binarize(const Embedding& y) {
  y.validate();
  return BinaryCodes::from_signs(y.coords);
}

BinaryCodes encode(const FeatureMatrix& x, const HashModel& model) {
  check_input(x, model, "encode");
  const std::size_t bits = model.code_bits();
  Matrix coords(x.size(), bits);
  parallel::for_each_index(x.size(), [&](std::size_t i) {
    std::vector<double> embed(model.embed_dim());
    encode_coords(x.data.row_span(i), model, embed.data(), coords.row(i));
  });
  return BinaryCodes::from_signs(coords);
}

std::vector<std::uint64_t> encode_point(std::span<const double> x,
                                        const HashModel& model) {
  if (x.size() != model.base.dim())
    throw ArgumentError("encode_point: dimension mismatch");
  const std::size_t bits = model.code_bits();
  std::vector<double> embed(model.embed_dim()), coords(bits);
  encode_coords(x, model, embed.data(), coords.data());
  std::vector<std::uint64_t> words((bits + 63) / 64, 0);
  for (std::size_t b = 0; b < bits; ++b)
    if (coords[b] > 0.0) words[b / 64] |= std::uint64_t{1} << (b % 64);
  return words;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

HashModel train(const FeatureMatrix& x, const TrainConfig& cfg,
                TrainReport* report) {
  x.validate();
  if (cfg.k < 1) throw ArgumentError("train: k must be at least 1");
  if (cfg.bits == 0) throw ArgumentError("train: bits must be positive");

  HashModel model;
  auto start = std::chrono::steady_clock::now();
  switch (cfg.base_method) {
    case BaseMethod::kmeans: {
      KMeansConfig kc = cfg.kmeans;
      kc.clusters = cfg.m;
      model.base = kmeans(x, kc);
      break;
    }
    case BaseMethod::kmedians: {
      KMeansConfig kc = cfg.kmeans;
      kc.clusters = cfg.m;
      model.base = kmedians(x, kc);
      break;
    }
    case BaseMethod::random_sample:
      model.base = random_sample(x, cfg.m, cfg.kmeans.seed);
      break;
    case BaseMethod::per_class_kmeans: {
      if (cfg.m_per_class == 0)
        throw ArgumentError("train: per-class method needs m_per_class");
      model.base = per_class_kmeans(x, cfg.m_per_class, cfg.kmeans);
      break;
    }
  }
  const double base_seconds = seconds_since(start);
  const std::size_t m = model.base.size();
  if (static_cast<std::size_t>(cfg.k) > m)
    throw ArgumentError("train: k exceeds the base set size");

  SigmaEstimate sig{0.0, false};
  if (cfg.sigma) {
    if (!(*cfg.sigma > 0.0))
      throw ArgumentError("train: sigma override must be positive");
    sig = {*cfg.sigma, false};
  } else {
    sig = estimate_sigma(model.base);
  }
  model.sigma = sig.sigma;
  model.k = cfg.k;
  model.backend = cfg.backend;

  start = std::chrono::steady_clock::now();
  TsneReport tsne_report;
  switch (cfg.backend) {
    case Backend::le_base:
      model.base_embedding =
          embed_le_base(base_affinity(model.base, model.sigma), cfg.bits);
      break;
    case Backend::le_relaxed: {
      const AffinityMatrices aff =
          build_affinities(x, model.base, cfg.k, model.sigma);
      model.base_embedding = embed_le_relaxed(aff, cfg.lambda, cfg.bits);
      break;
    }
    case Backend::tsne:
      model.base_embedding =
          embed_tsne(model.base.centers, cfg.bits, cfg.tsne, &tsne_report);
      break;
    case Backend::pca:
      model.base_embedding = embed_pca(model.base.centers, cfg.bits);
      break;
  }
  model.embedding_means = kernels::column_means(model.base_embedding.coords);

  if (cfg.use_itq) {
    Matrix centered = model.base_embedding.coords;
    for (std::size_t i = 0; i < centered.rows(); ++i)
      for (std::size_t j = 0; j < centered.cols(); ++j)
        centered(i, j) -= model.embedding_means[j];
    model.rotation =
        itq_rotation(centered, cfg.itq_iters, cfg.itq_seed).rotation;
  }
  const double embed_seconds = seconds_since(start);

  if (report) {
    report->base_seconds = base_seconds;
    report->embed_seconds = embed_seconds;
    report->sigma = sig.sigma;
    report->sigma_floored = sig.floored;
    report->tsne = tsne_report;
  }
  model.validate();
  return model;
}

}  // namespace imh

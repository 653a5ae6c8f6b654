// Kernel benchmark: OpenMP-parallel production kernels against the serial
// reference twins. Run with --benchmark_filter to narrow, OMP_NUM_THREADS
// or the environment to size the pool.

#include <benchmark/benchmark.h>

#include "imh/inductive.hpp"
#include "imh/kernels.hpp"
#include "imh/rng.hpp"
#include "imh/tsne.hpp"

namespace {

using imh::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  imh::Rng rng(seed);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

struct AssignData {
  Matrix x = random_matrix(20000, 64, 1);
  Matrix centers = random_matrix(400, 64, 2);
  std::vector<int> idx = std::vector<int>(20000);
  std::vector<double> dist = std::vector<double>(20000);
};

AssignData& assign_data() {
  static AssignData data;
  return data;
}

void bm_assign_nearest_parallel(benchmark::State& state) {
  auto& d = assign_data();
  for (auto _ : state) {
    imh::kernels::assign_nearest(d.x, d.centers, d.idx, d.dist);
    benchmark::DoNotOptimize(d.dist.data());
  }
}

void bm_assign_nearest_serial(benchmark::State& state) {
  auto& d = assign_data();
  for (auto _ : state) {
    imh::kernels::serial::assign_nearest(d.x, d.centers, d.idx, d.dist);
    benchmark::DoNotOptimize(d.dist.data());
  }
}

std::vector<double>& sum_values() {
  static std::vector<double> values = [] {
    std::vector<double> v(1 << 20);
    imh::Rng rng(3);
    for (double& x : v) x = rng.uniform01();
    return v;
  }();
  return values;
}

void bm_reduce_sum_parallel(benchmark::State& state) {
  for (auto _ : state) {
    double s = imh::kernels::reduce_sum(sum_values());
    benchmark::DoNotOptimize(s);
  }
}

void bm_reduce_sum_serial(benchmark::State& state) {
  for (auto _ : state) {
    double s = imh::kernels::serial::reduce_sum(sum_values());
    benchmark::DoNotOptimize(s);
  }
}

struct ExtendData {
  imh::HashModel model;
  imh::FeatureMatrix queries;

  ExtendData() {
    model.base.centers = random_matrix(400, 64, 4);
    model.base.method = imh::BaseMethod::kmeans;
    model.base_embedding.coords = random_matrix(400, 32, 5);
    model.embedding_means.assign(32, 0.0);
    model.sigma = 8.0;
    model.k = 5;
    model.backend = imh::Backend::tsne;
    queries.data = random_matrix(5000, 64, 6);
  }
};

ExtendData& extend_data() {
  static ExtendData data;
  return data;
}

void bm_extend_batch_parallel(benchmark::State& state) {
  auto& d = extend_data();
  for (auto _ : state) {
    imh::Embedding y = imh::extend_all(d.queries, d.model);
    benchmark::DoNotOptimize(y.coords.data().data());
  }
}

void bm_extend_rows_serial(benchmark::State& state) {
  auto& d = extend_data();
  for (auto _ : state) {
    double sink = 0.0;
    for (std::size_t i = 0; i < d.queries.size(); ++i) {
      const std::vector<double> y =
          imh::extend_embedding(d.queries.data.row_span(i), d.model);
      sink += y[0];
    }
    benchmark::DoNotOptimize(sink);
  }
}

struct TsneData {
  Matrix p;
  Matrix y = random_matrix(400, 16, 8);
  TsneData() {
    const Matrix points = random_matrix(400, 32, 7);
    p = imh::tsne_p_matrix(points, 30.0);
  }
};

TsneData& tsne_data() {
  static TsneData data;
  return data;
}

void bm_tsne_step(benchmark::State& state) {
  auto& d = tsne_data();
  imh::TsneConfig cfg;
  imh::TsneState st;
  Matrix y = d.y;
  for (auto _ : state) {
    const double kl = imh::tsne_step(d.p, y, st, cfg);
    benchmark::DoNotOptimize(kl);
  }
}

BENCHMARK(bm_assign_nearest_parallel);
BENCHMARK(bm_assign_nearest_serial);
BENCHMARK(bm_reduce_sum_parallel);
BENCHMARK(bm_reduce_sum_serial);
BENCHMARK(bm_extend_batch_parallel);
BENCHMARK(bm_extend_rows_serial);
BENCHMARK(bm_tsne_step);

}  // namespace

BENCHMARK_MAIN();

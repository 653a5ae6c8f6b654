#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace imh::parallel {

// Thread count used by the OpenMP kernels. Defaults to the OpenMP runtime
// default (OMP_NUM_THREADS or hardware threads); the CLI overrides it with
// --threads.
inline int& thread_setting() {
  static int threads = 0;  // 0 = runtime default
  return threads;
}

inline void set_threads(int n) { thread_setting() = n > 0 ? n : 0; }

inline int active_threads() {
#ifdef _OPENMP
  int n = thread_setting();
  return n > 0 ? n : omp_get_max_threads();
#else
  return 1;
#endif
}

// Fixed reduction grain. Reductions accumulate per-chunk partials over a
// grid of kChunk-sized index ranges and merge them serially in ascending
// chunk order. The grid depends only on the problem size, never on the
// thread count, so floating-point results are identical for any --threads.
inline constexpr std::size_t kChunk = 2048;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// Parallel loop over [0, n) with disjoint per-index writes.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const auto count = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(active_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

// Parallel loop over the chunk grid; fn(chunk_index, begin, end) must write
// only chunk-local state. Callers merge partials in ascending chunk order.
template <class Fn>
void for_each_chunk(std::size_t n, Fn&& fn) {
  const auto chunks = static_cast<std::int64_t>(chunk_count(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(active_threads())
#endif
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto begin = static_cast<std::size_t>(c) * kChunk;
    const auto end = begin + kChunk < n ? begin + kChunk : n;
    fn(static_cast<std::size_t>(c), begin, end);
  }
}

}  // namespace imh::parallel

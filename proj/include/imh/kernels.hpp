#pragma once

#include <span>
#include <vector>

#include "imh/matrix.hpp"

// Hot numeric kernels. The functions in imh::kernels are OpenMP-parallel and
// thread-count invariant (per-row writes, fixed-chunk reductions); the twins
// in imh::kernels::serial are plain loops kept as a reference for tests and
// the kernel benchmark. Per-row kernels match the reference bitwise;
// reductions match within accumulation tolerance.

namespace imh::kernels {

double squared_distance(const double* a, const double* b, std::size_t d);
double l1_distance(const double* a, const double* b, std::size_t d);

// Nearest center per row under squared Euclidean distance. Ties resolve to
// the lower center index. out_index/out_dist have X.rows() entries.
void assign_nearest(const Matrix& x, const Matrix& centers,
                    std::span<int> out_index, std::span<double> out_dist);

// Same under L1 distance (k-medians E-step).
void assign_nearest_l1(const Matrix& x, const Matrix& centers,
                       std::span<int> out_index, std::span<double> out_dist);

// Sum of a span with the fixed-chunk merge order.
double reduce_sum(std::span<const double> values);

// Per-column mean of a matrix (chunked over rows).
std::vector<double> column_means(const Matrix& m);

namespace serial {
void assign_nearest(const Matrix& x, const Matrix& centers,
                    std::span<int> out_index, std::span<double> out_dist);
void assign_nearest_l1(const Matrix& x, const Matrix& centers,
                       std::span<int> out_index, std::span<double> out_dist);
double reduce_sum(std::span<const double> values);
std::vector<double> column_means(const Matrix& m);
}  // namespace serial

}  // namespace imh::kernels

#pragma once

#include <vector>

#include "imh/affinity.hpp"
#include "imh/types.hpp"

namespace imh {

// Subtract each column's mean in place and return the means.
std::vector<double> center_columns(Matrix& m);

// Laplacian eigenmaps on the base centers alone: the r smallest non-trivial
// eigenvectors of L = D - W, columns rescaled to unit variance.
Embedding embed_le_base(const Matrix& w_base, std::size_t r);

// Relaxed objective that couples the base graph with the point-to-base
// rows: eigenvectors of M + lambda*T where M = D_B - W_B and
// T = D_BX - Wbar^T W, scaled by sqrt(m) so Y^T Y = m I.
Embedding embed_le_relaxed(const AffinityMatrices& aff, double lambda,
                           std::size_t r);

// Principal component scores of the centers, top r directions, loadings
// sign-fixed so the dominant coordinate of each direction is positive.
Embedding embed_pca(const Matrix& points, std::size_t r);

}  // namespace imh

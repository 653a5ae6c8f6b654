#pragma once

#include <vector>

#include "imh/matrix.hpp"

namespace imh {

struct SymEigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // one eigenvector per column, unit norm
};

// The q smallest eigenpairs of a symmetric matrix. The input must be
// symmetric within 1e-10 relative to its magnitude and is symmetrized as
// (A + A^T)/2 before the solve. With drop_trivial, eigenvectors whose
// eigenvalue is numerically zero and whose cosine against the all-ones
// vector exceeds 0.99 are discarded first (the constant solution of a graph
// Laplacian). Eigenvalue ties are ordered by the row of each vector's
// dominant coordinate, and signs are fixed so that coordinate is positive.
SymEigenResult smallest_eigenvectors(const Matrix& a, std::size_t q,
                                     bool drop_trivial);

// Largest principal angle (radians) between the column spans of two
// matrices with the same row count. Computed from the singular values of
// the projection of one orthonormalized basis off the other, which stays
// accurate for tiny angles.
double max_principal_angle(const Matrix& u, const Matrix& v);

}  // namespace imh

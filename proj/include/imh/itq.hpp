#pragma once

#include <cstdint>
#include <vector>

#include "imh/matrix.hpp"

namespace imh {

enum class ItqInit {
  random_orthogonal,  // QR of a seeded Gaussian draw
  identity,           // start from the unrotated quantization
};

struct ItqResult {
  Matrix rotation;     // r x r orthogonal
  double final_error;  // ||sign(YR) - YR||_F^2 for the returned rotation
  int iterations;      // alternation rounds actually run
  std::vector<double> error_history;  // non-increasing, entry 0 = init error
};

// Alternating quantization-error minimization: fix the rotation and take
// the sign codes, then fix the codes and solve the orthogonal Procrustes
// problem for the rotation. Stops after `iters` rounds or when the relative
// improvement drops below 1e-7. `y` must be column-centered.
ItqResult itq_rotation(const Matrix& y, int iters, std::uint64_t seed,
                       ItqInit init = ItqInit::random_orthogonal);

}  // namespace imh

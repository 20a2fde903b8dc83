#pragma once

#include "schurss/matrix.hpp"

namespace schurss {

enum class OrthoMethod { svd, eig_sqrt, iterative };

struct OrthoProjection {
  Matrix z_hat;
  OrthoMethod method;
  double ortho_error;  // squared-relative error of z_hat^T z_hat against I
  double distance;     // squared-relative distance of z_hat from z
};

// Nearest orthogonal matrix as the product of the SVD's orthogonal factors.
// This is the method the training constraint uses.
OrthoProjection nearest_orthogonal_svd(const Matrix& z);

// z (z^T z)^{-1/2} with the inverse square root from the symmetric
// eigendecomposition.
OrthoProjection nearest_orthogonal_eig(const Matrix& z);

// Same closed form, but the inverse square root comes from the Cayley product
// recursion; iters = 0 selects the default budget of n iterations.
OrthoProjection nearest_orthogonal_iter(const Matrix& z, std::size_t iters = 0);

}  // namespace schurss

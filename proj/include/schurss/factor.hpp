#pragma once

#include "schurss/matrix.hpp"

namespace schurss {

struct QrResult {
  Matrix q;  // orthogonal
  Matrix r;  // upper triangular, exact zeros below the diagonal
};

// Householder QR with the reflector sign chosen to avoid cancellation.
QrResult qr_factor(const Matrix& a);

struct Reflector {
  Vec u;          // unit vector; (I - 2uu^T)x lands on a multiple of e1
  bool identity;  // true when x was zero and no reflection is needed
};

Reflector householder_reflector(const Vec& x);

struct Svd2x2 {
  Matrix u;  // 2x2 orthogonal
  double sigma1, sigma2;  // sigma1 >= sigma2 >= 0
  Matrix v;  // 2x2 orthogonal
};

// Closed-form 2x2 SVD through rotations (symmetrize, then one Jacobi step).
// Signs are pinned (first row of u nonnegative) so downstream candidate sets
// are reproducible.
Svd2x2 svd_2x2(const Matrix& a);

struct SvdResult {
  Matrix u;
  Vec sigma;  // nonincreasing, nonnegative
  Matrix v;
};

// One-sided (Hestenes) Jacobi SVD for square matrices.
SvdResult jacobi_svd(const Matrix& a);

struct SymEigResult {
  Matrix q;    // orthogonal eigenvectors, column-wise
  Vec lambda;  // descending
};

// Cyclic Jacobi eigendecomposition; the input must be symmetric to
// 1e-10 relative.
SymEigResult sym_eig(const Matrix& a);

struct SpectralNormResult {
  double value;
  Vec left_vec, right_vec;  // unit singular vectors: a*right = value*left
  bool converged;           // false when the iteration cap was hit
};

// Largest singular value by power iteration on a^T a.
SpectralNormResult spectral_norm(const Matrix& a, double tol = 1e-13,
                                 std::size_t max_iter = 20000);

}  // namespace schurss

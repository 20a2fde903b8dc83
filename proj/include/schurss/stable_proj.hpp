#pragma once

#include <complex>

#include "schurss/matrix.hpp"
#include "schurss/schur.hpp"

namespace schurss {

// Eigenvalues of a 2x2 matrix from trace and determinant. Discriminants
// within roundoff of zero are snapped to zero so that double eigenvalues on
// the unit circle survive the stability filter.
struct Eig2x2 {
  std::complex<double> lambda_plus, lambda_minus;
};

Eig2x2 eig_2x2(const Matrix& a);

// Planar rotation g (angle alpha in [0, pi/2)) such that g^T a g has equal
// diagonal entries.
struct EqualizingRotation {
  double alpha;
  Matrix g;
};

EqualizingRotation equalizing_rotation(const Matrix& a);

// Critical points (tau, 1/tau) of (tau1-sigma1)^2 + (tau2-sigma2)^2 on the
// hyperbola tau1 tau2 = 1; at most four pairs.
std::vector<std::pair<double, double>> critical_points(double sigma1, double sigma2);

enum class CandidateTag { original, Aplus, Aminus, A0, Apm_upper, Apm_lower, Astar };

struct Candidate {
  Matrix value;
  CandidateTag tag;
};

// The finite stable-candidate set for a 2x2 block: the input itself, the
// rank-1 truncations of a -/+ I shifted back, the singular-frame hyperbola
// critical points, the double-eigenvalue +-1 triangles in the equalized
// frame, and the antidiagonal +-1 pairs. At most 15 members; not all are
// stable, the caller filters by eigenvalues.
struct CandidateSet {
  std::vector<Candidate> candidates;
};

CandidateSet candidate_set(const Matrix& a);

struct StableProjection {
  Matrix projected;
  double distance_sq;
  bool changed;
};

// Minimum-distance stable member of candidate_set(a); candidates whose
// eigenvalue magnitudes exceed 1 + 1e-12 are skipped, ties break on
// enumeration order.
StableProjection project_block(const Matrix& a);

// T_ii / max(1, |T_ii|) for scalar diagonal blocks.
double project_scalar(double t);

// Applies project_scalar / project_block to the diagonal blocks declared by
// the pattern b, leaving everything else untouched.
Matrix project_quasi_triangular(const Matrix& t, const std::vector<int>& b);

struct StateProjection {
  Matrix a_hat;
  SchurForm form;  // decomposition of the input that the projection reused
  bool changed;
};

// Schur-decomposes a, projects the quasi-triangular factor, and recomposes
// a_hat = z t_hat z^T. Already-stable inputs are returned bitwise.
StateProjection project_state_matrix(const Matrix& a);

}  // namespace schurss

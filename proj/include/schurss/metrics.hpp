#pragma once

#include <complex>

#include "schurss/matrix.hpp"

namespace schurss {

// Squared Frobenius distance normalized by the reference matrix energy.
double nsfe(const Matrix& a, const Matrix& x);

// Assignment-minimized squared spectral distance, normalized by the
// reference spectrum energy. Eigenvalues come from the Schur module.
double nssr(const Matrix& a, const Matrix& x);

// Same, for spectra that are already known.
double nssr_spectra(const std::vector<std::complex<double>>& ref,
                    const std::vector<std::complex<double>>& approx);

struct AssignmentResult {
  std::vector<std::size_t> permutation;  // row i is matched to column permutation[i]
  double total;
};

// Minimum-cost perfect matching on a square cost matrix (O(n^3) augmenting
// paths with dual potentials).
AssignmentResult assignment_min(const Matrix& cost);

// Mean squared violation of the unit-circle eigenvalue bound.
double msvr(const Matrix& a);
double msvr_spectrum(const std::vector<std::complex<double>>& eigenvalues);

// Output prediction error normalized by output variance. Sequences are
// time-major: y[k] is the output vector at step k.
double nmse(const std::vector<Vec>& y, const std::vector<Vec>& y_hat);

}  // namespace schurss

#pragma once

#include <complex>

#include "schurss/matrix.hpp"

namespace schurss {

// Real Schur decomposition a = z t z^T. The block pattern b tags each row of
// t: 1 = scalar block, 2 = first row of a 2x2 block, 0 = second row of a 2x2
// block. Declared 2x2 blocks always carry a strictly complex eigenvalue pair;
// real pairs are split into scalars during post-processing.
struct SchurForm {
  Matrix z;
  Matrix t;
  std::vector<int> b;
};

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
};

struct HessenbergResult {
  Matrix h;  // exact zeros below the first subdiagonal
  Matrix u;  // orthogonal, a = u h u^T
};

HessenbergResult hessenberg_reduce(const Matrix& a);

// Explicit Francis double-step QR on an upper-Hessenberg matrix. Deflation
// follows the Ahues-Tisseur criterion |X21||X12| <= eps |X22||X22 - X11| on
// the trailing 2x2 windows. max_sweeps = 0 selects the default budget of
// 30 n double-steps.
SchurForm francis_qr(const Matrix& h, double eps = 1e-12, std::size_t max_sweeps = 0);

SchurForm schur_decompose(const Matrix& a);

// Eigenvalues read off the quasi-triangular factor; conjugate pairs are
// constructed exactly, never recovered numerically.
Spectrum spectrum_of(const SchurForm& form);

// Convenience composition used by the metric and projection layers.
Spectrum eigenvalues_of(const Matrix& a);

// Real roots of t^4 + c3 t^3 + c1 t + c0, found as companion-matrix
// eigenvalues, Newton-polished, deduplicated within 1e-9.
Vec quartic_real_roots(double c3, double c1, double c0);

}  // namespace schurss

#include "schurss/ortho.hpp"

#include <cmath>
#include <string>

#include "schurss/factor.hpp"

namespace schurss {

namespace {

OrthoProjection finish(const Matrix& z, Matrix z_hat, OrthoMethod method) {
  const std::size_t n = z.rows();
  const Matrix gram = matmul_tn(z_hat, z_hat);
  const double ortho_err = frobenius_dist_sq(gram, Matrix::identity(n)) / static_cast<double>(n);
  const double nz = z.frobenius_norm();
  const double dist = frobenius_dist_sq(z, z_hat) / (nz * nz);
  return {std::move(z_hat), method, ortho_err, dist};
}

void require_square(const Matrix& z, const char* who) {
  if (!z.is_square()) throw DimensionError(std::string(who) + ": input must be square");
}

}  // namespace

OrthoProjection nearest_orthogonal_svd(const Matrix& z) {
  require_square(z, "nearest_orthogonal_svd");
  const SvdResult svd = jacobi_svd(z);
  const double smax = svd.sigma.front();
  const double smin = svd.sigma.back();
  if (smin <= 1e-12 * smax || smax == 0.0) {
    throw SingularityError("nearest_orthogonal_svd: rank-deficient input (sigma_min = " +
                           std::to_string(smin) + ")");
  }
  return finish(z, matmul_nt(svd.u, svd.v), OrthoMethod::svd);
}

OrthoProjection nearest_orthogonal_eig(const Matrix& z) {
  require_square(z, "nearest_orthogonal_eig");
  const std::size_t n = z.rows();
  const Matrix gram = matmul_tn(z, z);
  const SymEigResult eig = sym_eig(gram);
  Matrix scaled = eig.q;  // q diag(lambda^{-1/2})
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.lambda[j] <= 0.0) {
      throw SingularityError("nearest_orthogonal_eig: z^T z has a non-positive eigenvalue (" +
                             std::to_string(eig.lambda[j]) + ")");
    }
    const double inv_sqrt = 1.0 / std::sqrt(eig.lambda[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= inv_sqrt;
  }
  const Matrix inv_sqrt_gram = matmul_nt(scaled, eig.q);
  return finish(z, matmul(z, inv_sqrt_gram), OrthoMethod::eig_sqrt);
}

OrthoProjection nearest_orthogonal_iter(const Matrix& z, std::size_t iters) {
  require_square(z, "nearest_orthogonal_iter");
  const std::size_t n = z.rows();
  if (iters == 0) iters = n;
  const Matrix x = matmul_tn(z, z);
  const Matrix identity = Matrix::identity(n);

  // E0 = (I - X)(I + X)^{-1}. The factors commute (both are rational in X),
  // so the product is the plain solve below.
  Matrix e;
  try {
    e = solve(add_scaled_identity(x, 1.0), identity - x);
  } catch (const SingularityError&) {
    throw SingularityError("nearest_orthogonal_iter: I + z^T z is singular");
  }

  Matrix xi = identity;
  for (std::size_t r = 0; r < iters; ++r) {
    xi = matmul(xi, add_scaled_identity(e, 1.0));
    const Matrix e2 = matmul(e, e);
    Matrix two_minus = e2 * -1.0;
    for (std::size_t i = 0; i < n; ++i) two_minus(i, i) += 2.0;
    e = solve(two_minus, e2);  // E <- E^2 (2I - E^2)^{-1}, all terms commute
  }
  return finish(z, matmul(z, xi), OrthoMethod::iterative);
}

}  // namespace schurss

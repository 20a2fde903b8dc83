#include "schurss/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schurss/rng.hpp"

namespace schurss {

namespace {

// Rotation by theta as a 2x2 matrix [[c,-s],[s,c]].
Matrix rotation2(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Matrix{{c, -s}, {s, c}};
}

}  // namespace

Reflector householder_reflector(const Vec& x) {
  const std::size_t n = x.size();
  Reflector ref{Vec(n, 0.0), false};
  const double nx = norm2(x);
  if (nx == 0.0) {
    ref.identity = true;
    return ref;
  }
  Vec v = x;
  // Shift sign copied from the pivot so v[0] never cancels.
  v[0] += std::copysign(nx, x[0]);
  const double nv = norm2(v);
  if (nv == 0.0) {
    ref.identity = true;
    return ref;
  }
  for (double& e : v) e /= nv;
  ref.u = std::move(v);
  return ref;
}

QrResult qr_factor(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("qr_factor: input must be square");
  const std::size_t n = a.rows();
  Matrix r = a;
  Matrix q = Matrix::identity(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    Vec x(n - k);
    for (std::size_t i = k; i < n; ++i) x[i - k] = r(i, k);
    const Reflector ref = householder_reflector(x);
    if (ref.identity) continue;
    const Vec& u = ref.u;
    // r[k:, k:] -= 2 u (u^T r[k:, k:])
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += u[i - k] * r(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= s * u[i - k];
    }
    // q[:, k:] -= 2 (q[:, k:] u) u^T
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k; j < n; ++j) s += q(i, j) * u[j - k];
      s *= 2.0;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= s * u[j - k];
    }
  }
  // The factorization only defines these up to roundoff; pin them to zero.
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;
  return {std::move(q), std::move(r)};
}

Svd2x2 svd_2x2(const Matrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw DimensionError("svd_2x2: input must be 2x2");

  // Rotate from the left so the working matrix is symmetric, then one Jacobi
  // rotation diagonalizes it.
  const double phi = std::atan2(a(1, 0) - a(0, 1), a(0, 0) + a(1, 1));
  const Matrix rphi = rotation2(phi);
  const Matrix b = matmul_tn(rphi, a);  // symmetric up to roundoff

  const double p = b(0, 0), r = b(1, 1);
  const double q = 0.5 * (b(0, 1) + b(1, 0));
  double theta = 0.0;
  if (q != 0.0) theta = 0.5 * std::atan2(2.0 * q, p - r);
  const Matrix j = rotation2(theta);

  Matrix d = matmul(matmul_tn(j, b), j);
  double l1 = d(0, 0), l2 = d(1, 1);

  Matrix u = matmul(rphi, j);
  Matrix v = j;

  // Fold eigenvalue signs into u, then sort descending.
  if (l1 < 0.0) {
    l1 = -l1;
    u(0, 0) = -u(0, 0);
    u(1, 0) = -u(1, 0);
  }
  if (l2 < 0.0) {
    l2 = -l2;
    u(0, 1) = -u(0, 1);
    u(1, 1) = -u(1, 1);
  }
  if (l1 < l2) {
    std::swap(l1, l2);
    std::swap(u(0, 0), u(0, 1));
    std::swap(u(1, 0), u(1, 1));
    std::swap(v(0, 0), v(0, 1));
    std::swap(v(1, 0), v(1, 1));
  }
  // Deterministic frame: first row of u nonnegative (fall back to the second
  // row when an entry vanishes).
  for (std::size_t c = 0; c < 2; ++c) {
    double lead = u(0, c);
    if (lead == 0.0) lead = u(1, c);
    if (lead < 0.0) {
      u(0, c) = -u(0, c);
      u(1, c) = -u(1, c);
      v(0, c) = -v(0, c);
      v(1, c) = -v(1, c);
    }
  }
  return {std::move(u), l1, l2, std::move(v)};
}

SvdResult jacobi_svd(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("jacobi_svd: input must be square");
  const std::size_t n = a.rows();
  Matrix w = a;
  Matrix v = Matrix::identity(n);

  const double eps = 1e-15;
  const std::size_t max_sweeps = 60;
  double off = 0.0;
  bool converged = false;

  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          alpha += w(k, i) * w(k, i);
          beta += w(k, j) * w(k, j);
          gamma += w(k, i) * w(k, j);
        }
        if (alpha * beta == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double wi = w(k, i), wj = w(k, j);
          w(k, i) = c * wi - s * wj;
          w(k, j) = s * wi + c * wj;
          const double vi = v(k, i), vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("jacobi_svd: sweep limit reached", off);
  }

  Vec sigma(n, 0.0);
  Matrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix vs(n, n);
  Vec sg(n);
  const double sigma_max = sigma.empty() ? 0.0 : sigma[order[0]];
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    sg[c] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) vs(i, c) = v(i, src);
    if (sg[c] > 1e-14 * std::max(sigma_max, 1.0)) {
      for (std::size_t i = 0; i < n; ++i) u(i, c) = w(i, src) / sg[c];
      ++rank;
    }
  }
  // Complete u's trailing columns for (near-)rank-deficient inputs.
  for (std::size_t c = rank; c < n; ++c) {
    Vec cand(n, 0.0);
    for (std::size_t attempt = 0; attempt < n; ++attempt) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[(c + attempt) % n] = 1.0;
      for (std::size_t prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += cand[i] * u(i, prev);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, prev);
      }
      const double nc = norm2(cand);
      if (nc > 0.5) {
        for (std::size_t i = 0; i < n; ++i) cand[i] /= nc;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) u(i, c) = cand[i];
  }
  return {std::move(u), std::move(sg), std::move(vs)};
}

SymEigResult sym_eig(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("sym_eig: input must be square");
  const double asym = frobenius_dist_sq(a, a.transpose());
  const double nrm = a.frobenius_norm();
  if (std::sqrt(asym) > 1e-10 * std::max(nrm, 1e-300)) {
    throw DomainError("sym_eig: input is not symmetric");
  }

  const std::size_t n = a.rows();
  Matrix b = a;
  Matrix q = Matrix::identity(n);
  const std::size_t max_sweeps = 60;
  bool converged = false;
  double off = 0.0;

  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double bij = 0.5 * (b(i, j) + b(j, i));
        const double scale = std::abs(b(i, i)) + std::abs(b(j, j));
        off = std::max(off, std::abs(bij));
        if (std::abs(bij) <= 1e-15 * std::max(scale, 1e-300)) continue;
        converged = false;
        const double zeta = (b(j, j) - b(i, i)) / (2.0 * bij);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // Two-sided rotation on rows/columns i and j.
        for (std::size_t k = 0; k < n; ++k) {
          const double bik = b(i, k), bjk = b(j, k);
          b(i, k) = c * bik - s * bjk;
          b(j, k) = s * bik + c * bjk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double bki = b(k, i), bkj = b(k, j);
          b(k, i) = c * bki - s * bkj;
          b(k, j) = s * bki + c * bkj;
          const double qki = q(k, i), qkj = q(k, j);
          q(k, i) = c * qki - s * qkj;
          q(k, j) = s * qki + c * qkj;
        }
      }
    }
  }
  if (!converged) throw ConvergenceError("sym_eig: sweep limit reached", off);

  Vec lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = b(i, i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return lambda[x] > lambda[y]; });
  Matrix qs(n, n);
  Vec ls(n);
  for (std::size_t c = 0; c < n; ++c) {
    ls[c] = lambda[order[c]];
    for (std::size_t i = 0; i < n; ++i) qs(i, c) = q(i, order[c]);
  }
  return {std::move(qs), std::move(ls)};
}

SpectralNormResult spectral_norm(const Matrix& a, double tol, std::size_t max_iter) {
  const std::size_t n = a.rows(), m = a.cols();
  SpectralNormResult res{0.0, Vec(n, 0.0), Vec(m, 0.0), true};
  if (a.max_abs() == 0.0) {
    res.left_vec[0] = 1.0;
    res.right_vec[0] = 1.0;
    return res;
  }

  Rng rng(0x5eed5eedULL);
  Vec v(m);
  for (double& e : v) e = rng.normal();
  double nv = norm2(v);
  for (double& e : v) e /= nv;

  double prev = 0.0;
  bool converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vec u = a.apply(v);
    const double nu = norm2(u);
    if (nu == 0.0) {
      // v landed in the null space; restart from a fresh direction.
      for (double& e : v) e = rng.normal();
      nv = norm2(v);
      for (double& e : v) e /= nv;
      continue;
    }
    for (double& e : u) e /= nu;
    Vec w = a.apply_transposed(u);
    const double sigma = norm2(w);
    for (double& e : w) e /= sigma;
    v = std::move(w);
    if (std::abs(sigma - prev) <= tol * std::max(sigma, 1e-300)) {
      converged = true;
      prev = sigma;
      break;
    }
    prev = sigma;
  }
  res.converged = converged;
  res.right_vec = v;
  Vec u = a.apply(v);
  res.value = norm2(u);
  if (res.value > 0.0) {
    for (double& e : u) e /= res.value;
  } else {
    u.assign(n, 0.0);
    u[0] = 1.0;
  }
  res.left_vec = std::move(u);
  return res;
}

}  // namespace schurss

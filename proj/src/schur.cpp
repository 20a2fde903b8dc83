#include "schurss/schur.hpp"

#include <algorithm>
#include <cmath>

#include "schurss/factor.hpp"

namespace schurss {

namespace {

void validate_hessenberg(const Matrix& h) {
  for (std::size_t i = 2; i < h.rows(); ++i) {
    for (std::size_t j = 0; j + 1 < i; ++j) {
      if (h(i, j) != 0.0) {
        throw StructureError("francis_qr: input is not upper Hessenberg");
      }
    }
  }
}

bool ahues_tisseur(double x11, double x12, double x21, double x22, double eps) {
  if (x21 == 0.0) return true;
  return std::abs(x21) * std::abs(x12) <=
         eps * std::abs(x22) * std::abs(x22 - x11);
}

// Splits a 2x2 diagonal block with real eigenvalues into two scalars by a
// Givens rotation aligned with an eigenvector.
void split_real_block(Matrix& t, Matrix& z, std::size_t i) {
  const double x00 = t(i, i), x01 = t(i, i + 1);
  const double x10 = t(i + 1, i), x11 = t(i + 1, i + 1);
  const double tr = x00 + x11;
  const double disc = (x00 - x11) * (x00 - x11) + 4.0 * x01 * x10;
  const double root = std::sqrt(std::max(disc, 0.0));
  const double lambda = 0.5 * (tr + std::copysign(root, tr));
  double vx = lambda - x11, vy = x10;
  const double nv = std::hypot(vx, vy);
  if (nv == 0.0) return;  // already diagonal
  vx /= nv;
  vy /= nv;
  const std::size_t n = t.rows();
  for (std::size_t r = 0; r < n; ++r) {
    const double a = t(r, i), b = t(r, i + 1);
    t(r, i) = a * vx + b * vy;
    t(r, i + 1) = -a * vy + b * vx;
  }
  for (std::size_t c = 0; c < n; ++c) {
    const double a = t(i, c), b = t(i + 1, c);
    t(i, c) = vx * a + vy * b;
    t(i + 1, c) = -vy * a + vx * b;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double a = z(r, i), b = z(r, i + 1);
    z(r, i) = a * vx + b * vy;
    z(r, i + 1) = -a * vy + b * vx;
  }
  t(i + 1, i) = 0.0;
}

std::vector<int> block_pattern(const Matrix& t) {
  const std::size_t n = t.rows();
  std::vector<int> b(n, 1);
  std::size_t i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      b[i] = 2;
      b[i + 1] = 0;
      i += 2;
    } else {
      b[i] = 1;
      i += 1;
    }
  }
  return b;
}

}  // namespace

HessenbergResult hessenberg_reduce(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("hessenberg_reduce: input must be square");
  const std::size_t n = a.rows();
  Matrix h = a;
  Matrix u = Matrix::identity(n);
  if (n < 3) return {std::move(h), std::move(u)};

  std::vector<Vec> reflectors(n - 2);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Vec x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
    const Reflector ref = householder_reflector(x);
    reflectors[k] = ref.u;
    if (ref.identity) continue;
    const Vec& v = ref.u;
    // Left application to rows k+1..n-1 of columns k..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i - k - 1] * h(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i - k - 1];
    }
    // Right application to columns k+1..n-1 of all rows.
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j - k - 1];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j - k - 1];
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  // Accumulate u = P_1 ... P_{n-2} backwards; each reflector only touches the
  // trailing block, so the reverse order keeps the update cheap.
  for (std::size_t kk = n - 2; kk-- > 0;) {
    const Vec& v = reflectors[kk];
    if (v.empty() || norm2(v) == 0.0) continue;
    for (std::size_t j = kk + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = kk + 1; i < n; ++i) s += v[i - kk - 1] * u(i, j);
      s *= 2.0;
      for (std::size_t i = kk + 1; i < n; ++i) u(i, j) -= s * v[i - kk - 1];
    }
  }
  return {std::move(h), std::move(u)};
}

SchurForm francis_qr(const Matrix& h, double eps, std::size_t max_sweeps) {
  if (!h.is_square()) throw DimensionError("francis_qr: input must be square");
  if (eps <= 0.0) throw DomainError("francis_qr: eps must be positive");
  validate_hessenberg(h);

  const std::size_t n = h.rows();
  if (max_sweeps == 0) max_sweeps = 30 * std::max<std::size_t>(n, 1);

  Matrix t = h;
  Matrix z = Matrix::identity(n);
  std::size_t p = n;
  std::size_t total_sweeps = 0;
  std::size_t stagnant = 0;

  while (p > 2) {
    // Deflate as far as the trailing windows allow before sweeping.
    if (ahues_tisseur(t(p - 2, p - 2), t(p - 2, p - 1), t(p - 1, p - 2),
                      t(p - 1, p - 1), eps)) {
      t(p - 1, p - 2) = 0.0;
      p -= 1;
      stagnant = 0;
      continue;
    }
    if (p >= 3 && ahues_tisseur(t(p - 3, p - 3), t(p - 3, p - 2), t(p - 2, p - 3),
                                t(p - 2, p - 2), eps)) {
      t(p - 2, p - 3) = 0.0;
      p -= 2;
      stagnant = 0;
      continue;
    }
    if (total_sweeps >= max_sweeps) {
      throw ConvergenceError("francis_qr: sweep budget exhausted",
                             std::abs(t(p - 1, p - 2)), p);
    }

    double s = t(p - 2, p - 2) + t(p - 1, p - 1);
    double det = t(p - 2, p - 2) * t(p - 1, p - 1) - t(p - 2, p - 1) * t(p - 1, p - 2);
    if (stagnant > 0 && stagnant % 10 == 0) {
      // Ad-hoc exceptional shift from the trailing subdiagonal magnitudes.
      double mu = 0.75 * std::abs(t(p - 1, p - 2));
      if (p >= 3) mu += 0.75 * std::abs(t(p - 2, p - 3));
      mu += t(p - 1, p - 1);
      s = 2.0 * mu;
      det = mu * mu;
    }

    // M = T^2 - s T + det I on the active window.
    Matrix ta(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) ta(i, j) = t(i, j);
    Matrix m = matmul(ta, ta);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) m(i, j) -= s * ta(i, j);
      m(i, i) += det;
    }
    QrResult qr = qr_factor(m);
    const Matrix& q = qr.q;

    Matrix tnew = matmul(matmul_tn(q, ta), q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) t(i, j) = tnew(i, j);
    // Couple the active window to already-deflated trailing columns.
    if (p < n) {
      Matrix tail(p, n - p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = p; j < n; ++j) tail(i, j - p) = t(i, j);
      Matrix upd = matmul_tn(q, tail);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = p; j < n; ++j) t(i, j) = upd(i, j - p);
    }
    // z[:, 0:p] <- z[:, 0:p] q
    Matrix zcols(n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j) zcols(i, j) = z(i, j);
    Matrix zupd = matmul(zcols, q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j) z(i, j) = zupd(i, j);
    // Hessenberg structure is enforced explicitly after every sweep.
    for (std::size_t i = 2; i < p; ++i)
      for (std::size_t j = 0; j + 1 < i; ++j) t(i, j) = 0.0;

    ++total_sweeps;
    ++stagnant;
  }

  if (p == 2 && ahues_tisseur(t(0, 0), t(0, 1), t(1, 0), t(1, 1), eps)) {
    t(1, 0) = 0.0;
  }

  // Declared 2x2 blocks must carry complex pairs; split real pairs.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (t(i + 1, i) == 0.0) continue;
    const double tr = t(i, i) + t(i + 1, i + 1);
    const double det = t(i, i) * t(i + 1, i + 1) - t(i, i + 1) * t(i + 1, i);
    if (tr * tr - 4.0 * det >= 0.0) split_real_block(t, z, i);
  }

  return {std::move(z), std::move(t), block_pattern(t)};
}

SchurForm schur_decompose(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("schur_decompose: input must be square");
  HessenbergResult hess = hessenberg_reduce(a);
  SchurForm form = francis_qr(hess.h);
  form.z = matmul(hess.u, form.z);
  return form;
}

Spectrum spectrum_of(const SchurForm& form) {
  const std::size_t n = form.t.rows();
  if (form.b.size() != n) throw StructureError("spectrum_of: block pattern size mismatch");
  Spectrum sp;
  sp.eigenvalues.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    if (form.b[i] == 2) {
      if (i + 1 >= n || form.b[i + 1] != 0) {
        throw StructureError("spectrum_of: malformed block pattern");
      }
      const double tr = form.t(i, i) + form.t(i + 1, i + 1);
      const double det = form.t(i, i) * form.t(i + 1, i + 1) -
                         form.t(i, i + 1) * form.t(i + 1, i);
      const double disc = tr * tr - 4.0 * det;
      const double im = 0.5 * std::sqrt(std::max(-disc, 0.0));
      sp.eigenvalues.emplace_back(0.5 * tr, im);
      sp.eigenvalues.emplace_back(0.5 * tr, -im);
      i += 2;
    } else if (form.b[i] == 1) {
      sp.eigenvalues.emplace_back(form.t(i, i), 0.0);
      i += 1;
    } else {
      throw StructureError("spectrum_of: malformed block pattern");
    }
  }
  return sp;
}

Spectrum eigenvalues_of(const Matrix& a) { return spectrum_of(schur_decompose(a)); }

Vec quartic_real_roots(double c3, double c1, double c0) {
  const Matrix companion{{-c3, 0.0, -c1, -c0},
                         {1.0, 0.0, 0.0, 0.0},
                         {0.0, 1.0, 0.0, 0.0},
                         {0.0, 0.0, 1.0, 0.0}};
  const Spectrum sp = spectrum_of(francis_qr(companion));

  const auto poly = [&](double x) {
    return ((x + c3) * x * x + c1) * x + c0;
  };
  const auto dpoly = [&](double x) { return (4.0 * x + 3.0 * c3) * x * x + c1; };

  Vec roots;
  for (const auto& lam : sp.eigenvalues) {
    if (std::abs(lam.imag()) > 1e-5 * (1.0 + std::abs(lam.real()))) continue;
    double x = lam.real();
    for (int it = 0; it < 8; ++it) {
      const double d = dpoly(x);
      if (std::abs(d) < 1e-300) break;
      const double step = poly(x) / d;
      x -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    const double bound = 1e-9 * (1.0 + x * x * x * x);
    if (std::abs(poly(x)) <= std::max(bound, 1e-12)) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  Vec merged;
  for (double r : roots) {
    if (merged.empty() || std::abs(r - merged.back()) > 1e-9) merged.push_back(r);
  }
  return merged;
}

}  // namespace schurss

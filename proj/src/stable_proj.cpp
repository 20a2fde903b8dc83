#include "schurss/stable_proj.hpp"

#include <cmath>
#include <limits>

#include "schurss/factor.hpp"

namespace schurss {

namespace {

constexpr double kStabilityTol = 1e-12;

void require_2x2(const Matrix& a, const char* who) {
  if (a.rows() != 2 || a.cols() != 2) {
    throw DimensionError(std::string(who) + ": input must be 2x2");
  }
}

bool is_stable_2x2(const Matrix& a) {
  const Eig2x2 ev = eig_2x2(a);
  return std::abs(ev.lambda_plus) <= 1.0 + kStabilityTol &&
         std::abs(ev.lambda_minus) <= 1.0 + kStabilityTol;
}

Matrix conjugate_by(const Matrix& g, const Matrix& inner) {
  return matmul(matmul(g, inner), g.transpose());
}

}  // namespace

Eig2x2 eig_2x2(const Matrix& a) {
  require_2x2(a, "eig_2x2");
  const double tr = a(0, 0) + a(1, 1);
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double disc = tr * tr - 4.0 * det;
  // A boundary double root computes a discriminant of order eps; the square
  // root would amplify it to sqrt(eps) and push one root off the unit circle.
  const double scale = std::max({tr * tr, std::abs(4.0 * det), 1e-300});
  if (std::abs(disc) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    disc = 0.0;
  }
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return {{0.5 * (tr + root), 0.0}, {0.5 * (tr - root), 0.0}};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {{0.5 * tr, im}, {0.5 * tr, -im}};
}

EqualizingRotation equalizing_rotation(const Matrix& a) {
  require_2x2(a, "equalizing_rotation");
  const double p = a(0, 0) - a(1, 1);
  const double q = a(0, 1) + a(1, 0);
  double alpha = 0.0;
  if (p != 0.0 || q != 0.0) {
    // (a11 - a22) cos 2a + (a12 + a21) sin 2a = 0
    alpha = 0.5 * std::atan2(p, -q);
  }
  const double half_pi = 1.5707963267948966192313216916398;
  while (alpha < 0.0) alpha += half_pi;  // solutions repeat every pi/2
  while (alpha >= half_pi) alpha -= half_pi;
  const double c = std::cos(alpha), s = std::sin(alpha);
  return {alpha, Matrix{{c, -s}, {s, c}}};
}

std::vector<std::pair<double, double>> critical_points(double sigma1, double sigma2) {
  const Vec roots = quartic_real_roots(-sigma1, sigma2, -1.0);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(roots.size());
  for (double t : roots) {
    if (std::abs(t) < 1e-12) continue;  // t = 0 is never a root (p(0) = -1)
    pairs.emplace_back(t, 1.0 / t);
  }
  return pairs;
}

CandidateSet candidate_set(const Matrix& a) {
  require_2x2(a, "candidate_set");
  CandidateSet set;
  set.candidates.reserve(15);
  set.candidates.push_back({a, CandidateTag::original});

  // Rank-1 truncations of a -/+ I, shifted back: candidates with an exact
  // +-1 eigenvalue.
  for (int sign = +1; sign >= -1; sign -= 2) {
    const Svd2x2 svd = svd_2x2(add_scaled_identity(a, -static_cast<double>(sign)));
    Matrix rank1(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        rank1(i, j) = svd.sigma1 * svd.u(i, 0) * svd.v(j, 0);
    set.candidates.push_back({add_scaled_identity(rank1, static_cast<double>(sign)),
                              sign > 0 ? CandidateTag::Aplus : CandidateTag::Aminus});
  }

  // Hyperbola critical points in a's singular frame: candidates on the
  // determinant boundary.
  const Svd2x2 svd0 = svd_2x2(a);
  for (const auto& [t1, t2] : critical_points(svd0.sigma1, svd0.sigma2)) {
    Matrix m(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        m(i, j) = t1 * svd0.u(i, 0) * svd0.v(j, 0) + t2 * svd0.u(i, 1) * svd0.v(j, 1);
    set.candidates.push_back({std::move(m), CandidateTag::A0});
  }

  // Double-eigenvalue +-1 candidates in the equalized frame, off-diagonal
  // copied from the rotated input.
  const EqualizingRotation eq = equalizing_rotation(a);
  const Matrix check = matmul(matmul_tn(eq.g, a), eq.g);
  for (int sign = +1; sign >= -1; sign -= 2) {
    const double s = static_cast<double>(sign);
    set.candidates.push_back(
        {conjugate_by(eq.g, Matrix{{s, check(0, 1)}, {0.0, s}}), CandidateTag::Apm_upper});
    set.candidates.push_back(
        {conjugate_by(eq.g, Matrix{{s, 0.0}, {check(1, 0), s}}), CandidateTag::Apm_lower});
  }

  // Antidiagonal candidates with eigenvalues exactly {+1, -1}.
  for (const auto& [t1, t2] : critical_points(check(0, 1), check(1, 0))) {
    set.candidates.push_back(
        {conjugate_by(eq.g, Matrix{{0.0, t1}, {t2, 0.0}}), CandidateTag::Astar});
  }
  return set;
}

StableProjection project_block(const Matrix& a) {
  require_2x2(a, "project_block");
  const CandidateSet set = candidate_set(a);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = set.candidates.size();
  for (std::size_t k = 0; k < set.candidates.size(); ++k) {
    const double d = frobenius_dist_sq(a, set.candidates[k].value);
    if (d >= best) continue;
    if (!is_stable_2x2(set.candidates[k].value)) continue;
    best = d;
    best_idx = k;
  }
  // The antidiagonal family always supplies at least one stable member.
  if (best_idx == set.candidates.size()) {
    throw NumericError("project_block: candidate set contained no stable member");
  }
  if (best_idx == 0) return {a, 0.0, false};
  return {set.candidates[best_idx].value, best, true};
}

double project_scalar(double t) { return t / std::max(1.0, std::abs(t)); }

Matrix project_quasi_triangular(const Matrix& t, const std::vector<int>& b) {
  if (!t.is_square()) throw DimensionError("project_quasi_triangular: t must be square");
  const std::size_t n = t.rows();
  if (b.size() != n) throw StructureError("project_quasi_triangular: pattern size mismatch");

  Matrix out = t;
  std::size_t i = 0;
  while (i < n) {
    if (b[i] == 1) {
      if (i + 1 < n && t(i + 1, i) != 0.0) {
        throw StructureError("project_quasi_triangular: pattern declares a scalar over a block");
      }
      out(i, i) = project_scalar(t(i, i));
      i += 1;
    } else if (b[i] == 2) {
      if (i + 1 >= n || b[i + 1] != 0) {
        throw StructureError("project_quasi_triangular: dangling 2x2 block");
      }
      Matrix blk{{t(i, i), t(i, i + 1)}, {t(i + 1, i), t(i + 1, i + 1)}};
      const StableProjection proj = project_block(blk);
      out(i, i) = proj.projected(0, 0);
      out(i, i + 1) = proj.projected(0, 1);
      out(i + 1, i) = proj.projected(1, 0);
      out(i + 1, i + 1) = proj.projected(1, 1);
      i += 2;
    } else {
      throw StructureError("project_quasi_triangular: malformed pattern entry");
    }
    // Entries below the declared block diagonal must already be zero.
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t block_start = r;
    while (block_start > 0 && b[block_start] == 0) --block_start;
    for (std::size_t c = 0; c < block_start; ++c) {
      if (t(r, c) != 0.0) {
        throw StructureError("project_quasi_triangular: nonzero below block diagonal");
      }
    }
  }
  return out;
}

StateProjection project_state_matrix(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("project_state_matrix: input must be square");
  SchurForm form = schur_decompose(a);
  const Matrix t_hat = project_quasi_triangular(form.t, form.b);
  const bool changed = !(t_hat == form.t);
  if (!changed) {
    // Stable input: hand back the input itself rather than z t z^T, which
    // would re-introduce reconstruction roundoff.
    return {a, std::move(form), false};
  }
  Matrix a_hat = matmul_nt(matmul(form.z, t_hat), form.z);
  return {std::move(a_hat), std::move(form), true};
}

}  // namespace schurss

#include "schurss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schurss/schur.hpp"

namespace schurss {

double nsfe(const Matrix& a, const Matrix& x) {
  const double na = a.frobenius_norm();
  if (na == 0.0) throw DomainError("nsfe: reference matrix is zero");
  return frobenius_dist_sq(a, x) / (na * na);
}

AssignmentResult assignment_min(const Matrix& cost) {
  if (!cost.is_square()) throw DimensionError("assignment_min: cost matrix must be square");
  const std::size_t n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();

  // Jonker-Volgenant style shortest augmenting paths with potentials,
  // 1-based internal indexing.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // column -> row
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<double> minv(n + 1, inf);
    std::vector<std::size_t> way(n + 1, 0);
    std::vector<bool> used(n + 1, false);
    std::size_t j0 = 0;
    match[0] = i;
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult res;
  res.permutation.assign(n, 0);
  res.total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    res.permutation[match[j] - 1] = j - 1;
    res.total += cost(match[j] - 1, j - 1);
  }
  return res;
}

double nssr_spectra(const std::vector<std::complex<double>>& ref,
                    const std::vector<std::complex<double>>& approx) {
  if (ref.size() != approx.size()) throw DimensionError("nssr: spectrum size mismatch");
  const std::size_t n = ref.size();
  double energy = 0.0;
  for (const auto& lam : ref) energy += std::norm(lam);
  if (energy == 0.0) throw DomainError("nssr: reference spectrum has zero energy");

  Matrix cost(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = std::norm(approx[i] - ref[j]);
  return assignment_min(cost).total / energy;
}

double nssr(const Matrix& a, const Matrix& x) {
  if (!a.is_square() || a.rows() != x.rows() || a.cols() != x.cols()) {
    throw DimensionError("nssr: inputs must be square and same size");
  }
  return nssr_spectra(eigenvalues_of(a).eigenvalues, eigenvalues_of(x).eigenvalues);
}

double msvr_spectrum(const std::vector<std::complex<double>>& eigenvalues) {
  if (eigenvalues.empty()) throw DomainError("msvr: empty spectrum");
  double s = 0.0;
  for (const auto& lam : eigenvalues) {
    const double excess = std::max(std::abs(lam) - 1.0, 0.0);
    s += excess * excess;
  }
  return s / static_cast<double>(eigenvalues.size());
}

double msvr(const Matrix& a) { return msvr_spectrum(eigenvalues_of(a).eigenvalues); }

double nmse(const std::vector<Vec>& y, const std::vector<Vec>& y_hat) {
  if (y.size() != y_hat.size() || y.empty()) {
    throw DimensionError("nmse: sequences must be nonempty and equally long");
  }
  const std::size_t channels = y.front().size();
  Vec mean(channels, 0.0);
  for (const Vec& yk : y) {
    if (yk.size() != channels) throw DimensionError("nmse: ragged reference sequence");
    for (std::size_t c = 0; c < channels; ++c) mean[c] += yk[c];
  }
  for (double& m : mean) m /= static_cast<double>(y.size());

  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y_hat[k].size() != channels) throw DimensionError("nmse: ragged prediction sequence");
    for (std::size_t c = 0; c < channels; ++c) {
      const double e = y[k][c] - y_hat[k][c];
      const double s = y[k][c] - mean[c];
      num += e * e;
      den += s * s;
    }
  }
  if (den == 0.0) throw DomainError("nmse: reference output is constant");
  return num / den;
}

}  // namespace schurss

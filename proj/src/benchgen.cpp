#include "schurss/benchgen.hpp"

#include <cmath>

#include "schurss/factor.hpp"

namespace schurss {

StateSpaceModel random_stable_system(const SystemSpec& spec) {
  if (spec.eig_bound <= 0.0 || spec.eig_bound > 1.0) {
    throw DomainError("random_stable_system: eig_bound must lie in (0, 1]");
  }
  if (spec.n_x == 0 || spec.n_u == 0 || spec.n_y == 0) {
    throw DimensionError("random_stable_system: dimensions must be positive");
  }
  Rng rng(mix_seed(spec.seed, "system"));

  Matrix blocks(spec.n_x, spec.n_x);
  std::size_t i = 0;
  while (i + 1 < spec.n_x) {
    const double r = rng.uniform(0.1, spec.eig_bound);
    // Angle kept away from 0 and pi so the pair is genuinely complex.
    const double th = rng.uniform(0.1, 3.0415926535897931);
    blocks(i, i) = r * std::cos(th);
    blocks(i, i + 1) = -r * std::sin(th);
    blocks(i + 1, i) = r * std::sin(th);
    blocks(i + 1, i + 1) = r * std::cos(th);
    i += 2;
  }
  if (i < spec.n_x) {
    const double r = rng.uniform(0.1, spec.eig_bound);
    blocks(i, i) = rng.bernoulli(0.5) ? r : -r;
  }

  Matrix gauss(spec.n_x, spec.n_x);
  for (double& v : gauss.data()) v = rng.normal();
  const Matrix q = qr_factor(gauss).q;

  StateSpaceModel m;
  m.a = matmul_nt(matmul(q, blocks), q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n_x));
  m.b = Matrix(spec.n_x, spec.n_u);
  m.c = Matrix(spec.n_y, spec.n_x);
  m.d = Matrix(spec.n_y, spec.n_u);
  for (double& v : m.b.data()) v = scale * rng.normal();
  for (double& v : m.c.data()) v = scale * rng.normal();
  for (double& v : m.d.data()) v = scale * rng.normal();
  return m;
}

std::vector<Vec> gbn_sequence(std::size_t length, std::size_t channels, double p,
                              std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw DomainError("gbn_sequence: p must lie in [0, 1]");
  Rng rng(mix_seed(seed, "gbn"));
  Vec level(channels);
  for (double& l : level) l = rng.bernoulli(0.5) ? 1.0 : -1.0;
  std::vector<Vec> u(length, Vec(channels, 0.0));
  for (std::size_t k = 0; k < length; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      if (k > 0 && rng.bernoulli(p)) level[c] = -level[c];
      u[k][c] = level[c];
    }
  }
  return u;
}

DatasetSplit make_dataset(const StateSpaceModel& m, std::size_t samples_per_seq,
                          std::size_t seqs_per_partition, double noise_sigma,
                          double gbn_p, std::uint64_t seed) {
  if (samples_per_seq == 0 || seqs_per_partition == 0) {
    throw DomainError("make_dataset: sizes must be positive");
  }
  m.validate();
  DatasetSplit split;
  split.noise_sigma = noise_sigma;
  split.gbn_p = gbn_p;
  const Vec x0(m.n_x(), 0.0);

  const char* names[3] = {"train", "validation", "test"};
  std::vector<Sequence>* parts[3] = {&split.train, &split.validation, &split.test};
  for (int part = 0; part < 3; ++part) {
    Rng noise_rng(mix_seed(mix_seed(seed, names[part]), "noise"));
    for (std::size_t s = 0; s < seqs_per_partition; ++s) {
      Sequence seq;
      seq.u = gbn_sequence(samples_per_seq, m.n_u(),
                           gbn_p, mix_seed(mix_seed(seed, names[part]), s));
      seq.y = simulate(m, seq.u, x0).y;
      if (part == 0 && noise_sigma > 0.0) {
        for (Vec& yk : seq.y)
          for (double& v : yk) v += noise_sigma * noise_rng.normal();
      }
      parts[part]->push_back(std::move(seq));
    }
  }
  return split;
}

Matrix appendix_b_matrix(int benchmark_case, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("appendix_b_matrix: n must be at least 2");
  Matrix a(n, n);
  switch (benchmark_case) {
    case 1:
      for (double& v : a.data()) v = 2.0;
      return a;
    case 2:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const long d = static_cast<long>(i) - static_cast<long>(j);
          if (d == -1) {
            a(i, j) = -1.0;
          } else if (d <= 0 && d >= -3) {
            a(i, j) = -1.0;
          }
        }
      }
      return a;
    case 3: {
      Rng rng(mix_seed(seed, "case3"));
      for (double& v : a.data()) v = rng.normal();
      return a;
    }
    case 4: {
      Rng rng(mix_seed(seed, "case4"));
      for (double& v : a.data()) v = rng.uniform();
      return a;
    }
    default:
      throw DomainError("appendix_b_matrix: case must be 1..4");
  }
}

}  // namespace schurss

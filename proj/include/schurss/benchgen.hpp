#pragma once

#include <cstdint>

#include "schurss/sysid.hpp"

namespace schurss {

struct SystemSpec {
  std::size_t n_x = 5, n_u = 3, n_y = 3;
  double eig_bound = 0.99;  // in (0, 1]
  std::uint64_t seed = 0;
};

// Random stable system with eigenvalue radii uniform in (0.1, eig_bound),
// rotation-block construction so that n_x >= 2 always yields at least one
// complex-conjugate pair.
StateSpaceModel random_stable_system(const SystemSpec& spec);

// Generalized binary noise: per-channel +-1 signal with independent per-step
// switching probability p.
std::vector<Vec> gbn_sequence(std::size_t length, std::size_t channels, double p,
                              std::uint64_t seed);

// Simulates fresh GBN excitations per partition from x0 = 0; zero-mean
// Gaussian output noise of scale noise_sigma lands on the training partition
// only.
DatasetSplit make_dataset(const StateSpaceModel& m, std::size_t samples_per_seq,
                          std::size_t seqs_per_partition, double noise_sigma,
                          double gbn_p, std::uint64_t seed);

// Deterministic and random projection-benchmark matrices: 1 = all twos,
// 2 = the -1 band pattern, 3 = standard normal entries, 4 = uniform [0,1).
Matrix appendix_b_matrix(int benchmark_case, std::size_t n, std::uint64_t seed);

}  // namespace schurss

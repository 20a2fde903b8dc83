#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "schurss/matrix.hpp"
#include "schurss/rng.hpp"

namespace schurss {

// Discrete-time linear state-space model
//   x[k+1] = A x[k] + B u[k],  y[k] = C x[k] + D u[k].
struct StateSpaceModel {
  Matrix a, b, c, d;

  std::size_t n_x() const { return a.rows(); }
  std::size_t n_u() const { return b.cols(); }
  std::size_t n_y() const { return c.rows(); }

  void validate() const;
};

struct Sequence {
  std::vector<Vec> u, y;
};

struct DatasetSplit {
  std::vector<Sequence> train, validation, test;
  double noise_sigma = 0.0;
  double gbn_p = 0.1;
};

struct SimResult {
  std::vector<Vec> y;  // outputs, one per input step
  std::vector<Vec> x;  // states x[0..N-1] feeding those outputs
};

SimResult simulate(const StateSpaceModel& m, const std::vector<Vec>& u, const Vec& x0);

struct Gradients {
  Matrix a, b, c, d;
};

struct LossGrads {
  double loss;
  Gradients grads;
};

// Mean-squared output error and its exact gradients via the adjoint
// recursion lambda[k] = A^T lambda[k+1] + C^T (2/N)(y_hat[k] - y[k]).
LossGrads loss_and_grads(const StateSpaceModel& m, const std::vector<Vec>& u,
                         const std::vector<Vec>& y, const Vec& x0);

// Full-batch variant over several sequences, each restarted from x0 = 0.
// The loss averages over the total step count.
LossGrads loss_and_grads_batch(const StateSpaceModel& m, const std::vector<Sequence>& seqs);

struct RegTerm {
  double value;
  Matrix grad;
};

// Hinge-squared spectral-norm regularizer max(|A|_2^2 - 1 + eps, 0)^2 and its
// gradient through the top singular triplet.
RegTerm reg_term_and_grad(const Matrix& a, double eps_reg);

struct AdamWConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-7;
  double weight_decay = 4e-3;
};

struct OptimizerState {
  AdamWConfig cfg;
  std::size_t step_count = 0;
  std::vector<Matrix> m1, m2;  // first/second moment per parameter

  static OptimizerState init(const AdamWConfig& cfg, const std::vector<const Matrix*>& params);
};

// Decoupled-weight-decay adaptive moment step, in place.
void adamw_step(OptimizerState& state, const std::vector<Matrix*>& params,
                const std::vector<const Matrix*>& grads);

// Pre-factorized state-matrix parameters: a free orthogonal factor and a free
// quasi-triangular factor over a fixed block layout (2x2 blocks, trailing
// scalar iff n_x is odd).
struct BuiltParams {
  Matrix z_raw, t_raw;
};

std::vector<int> built_block_pattern(std::size_t n_x);

StateSpaceModel apply_constraint_schur_proj(const StateSpaceModel& m);
BuiltParams apply_constraint_schur_built(const BuiltParams& p);
Matrix realize(const BuiltParams& p);

enum class Method { schur_proj, schur_built, regularized };

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

struct TrainConfig {
  Method method = Method::schur_proj;
  std::size_t epochs = 2000;
  std::size_t patience = std::numeric_limits<std::size_t>::max();  // "infinite"
  double lr = 1e-3;
  double rho_r = 1e-2;
  double eps_reg = 1e-3;
  std::uint64_t seed = 0;
  double min_delta_rel = 1e-6;
  double weight_decay = 4e-3;
};

struct EpochRecord {
  double train_loss, val_loss, msvr;
};

enum class StopReason { max_epochs, early_stop };

struct TrainRun {
  StateSpaceModel best_model;
  std::optional<BuiltParams> best_built;
  std::vector<EpochRecord> history;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double best_val = 0.0;
  StopReason stop_reason = StopReason::max_epochs;
};

struct TrainInit {
  StateSpaceModel model;
  // Factor parameters for schur_built; derived from model.a when absent.
  std::optional<BuiltParams> built;
};

TrainRun train(const DatasetSplit& data, const TrainConfig& cfg, const TrainInit& init);

// Seeded initial weights for training runs: stable rotation-block A (radius
// 0.3..0.9), Gaussian B, C, D scaled by 1/sqrt(n_x).
StateSpaceModel random_init_model(std::size_t n_x, std::size_t n_u, std::size_t n_y, Rng& rng);
BuiltParams random_init_built(std::size_t n_x, Rng& rng);

}  // namespace schurss

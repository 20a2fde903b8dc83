#include "schurss/sysid.hpp"

#include <cmath>
#include <string>

#include "schurss/factor.hpp"
#include "schurss/metrics.hpp"
#include "schurss/ortho.hpp"
#include "schurss/stable_proj.hpp"

namespace schurss {

void StateSpaceModel::validate() const {
  if (!a.is_square()) throw DimensionError("state matrix must be square");
  if (b.rows() != a.rows()) throw DimensionError("B row count must match n_x");
  if (c.cols() != a.rows()) throw DimensionError("C column count must match n_x");
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw DimensionError("D must be n_y x n_u");
  }
}

SimResult simulate(const StateSpaceModel& m, const std::vector<Vec>& u, const Vec& x0) {
  m.validate();
  if (x0.size() != m.n_x()) throw DimensionError("simulate: x0 size mismatch");
  SimResult out;
  out.y.reserve(u.size());
  out.x.reserve(u.size());
  Vec x = x0;
  for (const Vec& uk : u) {
    if (uk.size() != m.n_u()) throw DimensionError("simulate: input channel mismatch");
    Vec yk = m.c.apply(x);
    const Vec feed = m.d.apply(uk);
    for (std::size_t i = 0; i < yk.size(); ++i) yk[i] += feed[i];
    out.x.push_back(x);
    out.y.push_back(std::move(yk));
    Vec xn = m.a.apply(x);
    const Vec bu = m.b.apply(uk);
    for (std::size_t i = 0; i < xn.size(); ++i) xn[i] += bu[i];
    x = std::move(xn);
  }
  return out;
}

namespace {

// Shared adjoint-recursion accumulator; inv_n is 1/N for the whole batch.
void accumulate_adjoint(const StateSpaceModel& m, const std::vector<Vec>& u,
                        const std::vector<Vec>& y, const Vec& x0, double inv_n,
                        double& loss, Gradients& g) {
  const std::size_t steps = u.size();
  if (y.size() != steps) throw DimensionError("loss_and_grads: u/y length mismatch");
  const SimResult sim = simulate(m, u, x0);

  std::vector<Vec> err(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    if (y[k].size() != m.n_y()) throw DimensionError("loss_and_grads: output channel mismatch");
    Vec e(m.n_y());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = sim.y[k][i] - y[k][i];
    loss += inv_n * dot(e, e);
    err[k] = std::move(e);
  }

  // dL/dC += (2/N) e x^T, dL/dD += (2/N) e u^T; A and B pick up the adjoint.
  Vec lambda(m.n_x(), 0.0);
  for (std::size_t k = steps; k-- > 0;) {
    for (std::size_t i = 0; i < m.n_y(); ++i) {
      const double w = 2.0 * inv_n * err[k][i];
      for (std::size_t j = 0; j < m.n_x(); ++j) g.c(i, j) += w * sim.x[k][j];
      for (std::size_t j = 0; j < m.n_u(); ++j) g.d(i, j) += w * u[k][j];
    }
    // lambda here is dL/dx[k+1]; it multiplies the transition from step k.
    for (std::size_t i = 0; i < m.n_x(); ++i) {
      const double li = lambda[i];
      if (li != 0.0) {
        for (std::size_t j = 0; j < m.n_x(); ++j) g.a(i, j) += li * sim.x[k][j];
        for (std::size_t j = 0; j < m.n_u(); ++j) g.b(i, j) += li * u[k][j];
      }
    }
    Vec next = m.a.apply_transposed(lambda);
    const Vec ce = m.c.apply_transposed(err[k]);
    for (std::size_t i = 0; i < m.n_x(); ++i) next[i] += 2.0 * inv_n * ce[i];
    lambda = std::move(next);
  }
}

Gradients zero_gradients(const StateSpaceModel& m) {
  return {Matrix(m.n_x(), m.n_x()), Matrix(m.n_x(), m.n_u()),
          Matrix(m.n_y(), m.n_x()), Matrix(m.n_y(), m.n_u())};
}

double mse_on(const StateSpaceModel& m, const std::vector<Sequence>& seqs) {
  double sum = 0.0;
  std::size_t n = 0;
  const Vec x0(m.n_x(), 0.0);
  for (const Sequence& s : seqs) {
    const SimResult sim = simulate(m, s.u, x0);
    for (std::size_t k = 0; k < s.y.size(); ++k) {
      for (std::size_t i = 0; i < s.y[k].size(); ++i) {
        const double e = sim.y[k][i] - s.y[k][i];
        sum += e * e;
      }
    }
    n += s.u.size();
  }
  if (n == 0) throw DomainError("mse: empty partition");
  return sum / static_cast<double>(n);
}

}  // namespace

LossGrads loss_and_grads(const StateSpaceModel& m, const std::vector<Vec>& u,
                         const std::vector<Vec>& y, const Vec& x0) {
  m.validate();
  if (u.empty()) throw DimensionError("loss_and_grads: empty sequence");
  LossGrads out{0.0, zero_gradients(m)};
  accumulate_adjoint(m, u, y, x0, 1.0 / static_cast<double>(u.size()), out.loss, out.grads);
  if (!std::isfinite(out.loss)) throw NumericError("loss_and_grads: non-finite loss");
  return out;
}

LossGrads loss_and_grads_batch(const StateSpaceModel& m, const std::vector<Sequence>& seqs) {
  m.validate();
  std::size_t total = 0;
  for (const Sequence& s : seqs) total += s.u.size();
  if (total == 0) throw DimensionError("loss_and_grads: empty batch");
  LossGrads out{0.0, zero_gradients(m)};
  const Vec x0(m.n_x(), 0.0);
  for (const Sequence& s : seqs) {
    accumulate_adjoint(m, s.u, s.y, x0, 1.0 / static_cast<double>(total), out.loss, out.grads);
  }
  if (!std::isfinite(out.loss)) throw NumericError("loss_and_grads: non-finite loss");
  return out;
}

RegTerm reg_term_and_grad(const Matrix& a, double eps_reg) {
  if (!a.is_square()) throw DimensionError("reg_term_and_grad: input must be square");
  const SpectralNormResult sn = spectral_norm(a);
  const double hinge = sn.value * sn.value - 1.0 + eps_reg;
  RegTerm out{0.0, Matrix(a.rows(), a.cols())};
  if (hinge <= 0.0) return out;
  out.value = hinge * hinge;
  const double w = 4.0 * hinge * sn.value;  // 2 hinge * d(sigma^2)/dsigma
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out.grad(i, j) = w * sn.left_vec[i] * sn.right_vec[j];
  return out;
}

OptimizerState OptimizerState::init(const AdamWConfig& cfg,
                                    const std::vector<const Matrix*>& params) {
  OptimizerState st;
  st.cfg = cfg;
  for (const Matrix* p : params) {
    st.m1.emplace_back(p->rows(), p->cols());
    st.m2.emplace_back(p->rows(), p->cols());
  }
  return st;
}

void adamw_step(OptimizerState& state, const std::vector<Matrix*>& params,
                const std::vector<const Matrix*>& grads) {
  if (params.size() != state.m1.size() || grads.size() != params.size()) {
    throw DimensionError("adamw_step: parameter/state arity mismatch");
  }
  const AdamWConfig& c = state.cfg;
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step_count));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& theta = *params[p];
    const Matrix& g = *grads[p];
    Matrix& m1 = state.m1[p];
    Matrix& m2 = state.m2[p];
    if (g.rows() != theta.rows() || g.cols() != theta.cols()) {
      throw DimensionError("adamw_step: gradient shape mismatch");
    }
    for (std::size_t k = 0; k < theta.data().size(); ++k) {
      const double gk = g.data()[k];
      m1.data()[k] = c.beta1 * m1.data()[k] + (1.0 - c.beta1) * gk;
      m2.data()[k] = c.beta2 * m2.data()[k] + (1.0 - c.beta2) * gk * gk;
      const double mhat = m1.data()[k] / bc1;
      const double vhat = m2.data()[k] / bc2;
      theta.data()[k] -=
          c.lr * (mhat / (std::sqrt(vhat) + c.eps) + c.weight_decay * theta.data()[k]);
    }
  }
}

std::vector<int> built_block_pattern(std::size_t n_x) {
  std::vector<int> b;
  b.reserve(n_x);
  while (b.size() + 1 < n_x) {
    b.push_back(2);
    b.push_back(0);
  }
  if (b.size() < n_x) b.push_back(1);
  return b;
}

StateSpaceModel apply_constraint_schur_proj(const StateSpaceModel& m) {
  StateSpaceModel out = m;
  out.a = project_state_matrix(m.a).a_hat;
  return out;
}

BuiltParams apply_constraint_schur_built(const BuiltParams& p) {
  if (!p.z_raw.is_square() || p.z_raw.rows() != p.t_raw.rows() || !p.t_raw.is_square()) {
    throw DimensionError("apply_constraint_schur_built: factor shape mismatch");
  }
  BuiltParams out;
  out.z_raw = nearest_orthogonal_svd(p.z_raw).z_hat;
  const std::vector<int> pattern = built_block_pattern(p.t_raw.rows());
  Matrix t = p.t_raw;
  const std::size_t n = t.rows();
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t block_start = r;
    if (pattern[r] == 0) block_start = r - 1;
    for (std::size_t c = 0; c < block_start; ++c) t(r, c) = 0.0;
  }
  out.t_raw = project_quasi_triangular(t, pattern);
  return out;
}

Matrix realize(const BuiltParams& p) {
  return matmul_nt(matmul(p.z_raw, p.t_raw), p.z_raw);
}

const char* method_name(Method m) {
  switch (m) {
    case Method::schur_proj: return "schur-proj";
    case Method::schur_built: return "schur-built";
    case Method::regularized: return "regularized";
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "schur-proj" || name == "schur_proj") return Method::schur_proj;
  if (name == "schur-built" || name == "schur_built") return Method::schur_built;
  if (name == "regularized") return Method::regularized;
  return std::nullopt;
}

TrainRun train(const DatasetSplit& data, const TrainConfig& cfg, const TrainInit& init) {
  if (data.train.empty() || data.validation.empty()) {
    throw DomainError("train: train/validation partitions must be nonempty");
  }
  init.model.validate();

  StateSpaceModel model = init.model;
  BuiltParams built;
  const bool is_built = cfg.method == Method::schur_built;
  const bool is_proj = cfg.method == Method::schur_proj;

  if (is_built) {
    if (init.built) {
      built = *init.built;
    } else {
      const SchurForm form = schur_decompose(model.a);
      built = {form.z, form.t};
    }
    built = apply_constraint_schur_built(built);
    model.a = realize(built);
  } else if (is_proj) {
    model = apply_constraint_schur_proj(model);
  }

  AdamWConfig opt_cfg;
  opt_cfg.lr = cfg.lr;
  opt_cfg.weight_decay = cfg.weight_decay;

  std::vector<Matrix*> params;
  if (is_built) {
    params = {&built.z_raw, &built.t_raw, &model.b, &model.c, &model.d};
  } else {
    params = {&model.a, &model.b, &model.c, &model.d};
  }
  std::vector<const Matrix*> cparams(params.begin(), params.end());
  OptimizerState opt = OptimizerState::init(opt_cfg, cparams);

  TrainRun run;
  run.best_model = model;
  if (is_built) run.best_built = built;
  double best_val = std::numeric_limits<double>::infinity();
  double early_best = std::numeric_limits<double>::infinity();
  std::size_t stagnant = 0;
  run.stop_reason = StopReason::max_epochs;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossGrads lg;
    try {
      lg = loss_and_grads_batch(model, data.train);
    } catch (const NumericError&) {
      throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                         " (method " + method_name(cfg.method) +
                         ", msvr " + std::to_string(msvr(model.a)) + ")");
    }
    double train_loss = lg.loss;
    if (cfg.method == Method::regularized && cfg.rho_r != 0.0) {
      const RegTerm reg = reg_term_and_grad(model.a, cfg.eps_reg);
      train_loss += cfg.rho_r * reg.value;
      for (std::size_t k = 0; k < lg.grads.a.data().size(); ++k) {
        lg.grads.a.data()[k] += cfg.rho_r * reg.grad.data()[k];
      }
    }

    if (is_built) {
      // Chain rule through A = Z T Z^T at the constrained point.
      const Matrix& g = lg.grads.a;
      const Matrix grad_t = matmul(matmul_tn(built.z_raw, g), built.z_raw);
      const Matrix grad_z =
          matmul(g, matmul_nt(built.z_raw, built.t_raw)) +
          matmul_tn(g, matmul(built.z_raw, built.t_raw));
      std::vector<const Matrix*> grads = {&grad_z, &grad_t, &lg.grads.b, &lg.grads.c,
                                          &lg.grads.d};
      adamw_step(opt, params, grads);
      built = apply_constraint_schur_built(built);
      model.a = realize(built);
    } else {
      std::vector<const Matrix*> grads = {&lg.grads.a, &lg.grads.b, &lg.grads.c,
                                          &lg.grads.d};
      adamw_step(opt, params, grads);
      if (is_proj) model = apply_constraint_schur_proj(model);
    }

    const double val_loss = mse_on(model, data.validation);
    if (!std::isfinite(val_loss)) {
      throw NumericError("train: non-finite validation loss at epoch " +
                         std::to_string(epoch) + " (method " + method_name(cfg.method) + ")");
    }
    run.history.push_back({train_loss, val_loss, msvr(model.a)});

    if (val_loss < best_val) {
      best_val = val_loss;
      run.best_model = model;
      if (is_built) run.best_built = built;
      run.best_epoch = epoch;
    }
    if (val_loss < early_best * (1.0 - cfg.min_delta_rel)) {
      early_best = val_loss;
      stagnant = 0;
    } else if (++stagnant >= cfg.patience) {
      run.epochs_run = epoch + 1;
      run.stop_reason = StopReason::early_stop;
      break;
    }
  }
  if (run.epochs_run == 0) run.epochs_run = run.history.size();
  run.best_val = best_val;
  return run;
}

StateSpaceModel random_init_model(std::size_t n_x, std::size_t n_u, std::size_t n_y,
                                  Rng& rng) {
  if (n_x == 0 || n_u == 0 || n_y == 0) throw DimensionError("model dims must be positive");
  Matrix blocks(n_x, n_x);
  std::size_t i = 0;
  while (i + 1 < n_x) {
    const double r = rng.uniform(0.3, 0.9);
    const double th = rng.uniform(0.1, 3.0415926535897931);
    blocks(i, i) = r * std::cos(th);
    blocks(i, i + 1) = -r * std::sin(th);
    blocks(i + 1, i) = r * std::sin(th);
    blocks(i + 1, i + 1) = r * std::cos(th);
    i += 2;
  }
  if (i < n_x) blocks(i, i) = rng.uniform(0.3, 0.9);

  Matrix gauss(n_x, n_x);
  for (double& v : gauss.data()) v = rng.normal();
  const Matrix q = qr_factor(gauss).q;
  StateSpaceModel m;
  m.a = matmul_nt(matmul(q, blocks), q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_x));
  m.b = Matrix(n_x, n_u);
  m.c = Matrix(n_y, n_x);
  m.d = Matrix(n_y, n_u);
  for (double& v : m.b.data()) v = scale * rng.normal();
  for (double& v : m.c.data()) v = scale * rng.normal();
  for (double& v : m.d.data()) v = scale * rng.normal();
  return m;
}

BuiltParams random_init_built(std::size_t n_x, Rng& rng) {
  Matrix gauss(n_x, n_x);
  for (double& v : gauss.data()) v = rng.normal();
  BuiltParams p;
  p.z_raw = qr_factor(gauss).q;
  p.t_raw = Matrix(n_x, n_x);
  std::size_t i = 0;
  while (i + 1 < n_x) {
    const double r = rng.uniform(0.3, 0.9);
    const double th = rng.uniform(0.1, 3.0415926535897931);
    p.t_raw(i, i) = r * std::cos(th);
    p.t_raw(i, i + 1) = -r * std::sin(th);
    p.t_raw(i + 1, i) = r * std::sin(th);
    p.t_raw(i + 1, i + 1) = r * std::cos(th);
    i += 2;
  }
  if (i < n_x) p.t_raw(i, i) = rng.uniform(0.3, 0.9);
  return p;
}

}  // namespace schurss

#include <ebmforge/sampling.hpp>

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ebmforge {

namespace {

Eigen::VectorXd draw_normal(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

void apply_clamp(Eigen::VectorXd& x, const std::optional<BoxClamp>& clamp) {
  if (!clamp) return;
  x = x.cwiseMax(clamp->lo).cwiseMin(clamp->hi);
}

[[noreturn]] void nonfinite_error(const char* where, const Eigen::VectorXd& x, double energy) {
  std::ostringstream os;
  os << where << ": non-finite value, energy=" << energy << " at x=[";
  for (long i = 0; i < std::min<long>(x.size(), 8); ++i) os << (i ? "," : "") << x[i];
  if (x.size() > 8) os << ",...";
  os << "]";
  throw std::runtime_error(os.str());
}

}  // namespace

Eigen::VectorXd langevin_step(const Eigen::VectorXd& x, const EnergyModel& model, double lambda,
                              double sigma, std::mt19937_64& rng) {
  if (lambda <= 0.0) throw std::invalid_argument("langevin_step: lambda must be > 0");
  if (sigma < 0.0) throw std::invalid_argument("langevin_step: sigma must be >= 0");
  double e;
  Eigen::VectorXd g;
  model.value_and_grad_x(x, e, g);
  if (!g.allFinite()) nonfinite_error("langevin_step", x, e);
  Eigen::VectorXd noise = draw_normal(x.size(), rng);
  return x - 0.5 * lambda * g + sigma * noise;
}

double mala_log_acceptance(const EnergyModel& model, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y, double lambda) {
  double ex, ey;
  Eigen::VectorXd gx, gy;
  model.value_and_grad_x(x, ex, gx);
  model.value_and_grad_x(y, ey, gy);
  // q(b|a) = N(b; a - lambda/2 grad E(a), lambda I)
  double log_q_forward = -(y - (x - 0.5 * lambda * gx)).squaredNorm() / (2.0 * lambda);
  double log_q_backward = -(x - (y - 0.5 * lambda * gy)).squaredNorm() / (2.0 * lambda);
  double ratio = -ey + ex + log_q_backward - log_q_forward;
  if (!std::isfinite(ratio)) nonfinite_error("mala_log_acceptance", y, ey);
  return ratio;
}

std::pair<Eigen::VectorXd, bool> mala_step(const Eigen::VectorXd& x, const EnergyModel& model,
                                           double lambda, std::mt19937_64& rng) {
  if (lambda <= 0.0) throw std::invalid_argument("mala_step: lambda must be > 0");
  double sigma = SamplerConfig::theoretical_noise(lambda);
  Eigen::VectorXd y = langevin_step(x, model, lambda, sigma, rng);
  double log_alpha = mala_log_acceptance(model, x, y, lambda);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (std::log(u(rng)) < log_alpha) return {y, true};
  return {x, false};
}

Eigen::VectorXd apply_transition(const Eigen::VectorXd& x, const TransitionOp& op,
                                 std::mt19937_64& rng) {
  switch (op.kind) {
    case TransitionOp::kGaussianJitter:
      return x + op.scale * draw_normal(x.size(), rng);

    case TransitionOp::kElasticDeformation: {
      if (op.h <= 0 || op.w <= 0 || op.h * op.w != x.size())
        throw std::invalid_argument("apply_transition: elastic deformation needs a 2-D raster layout");
      long h = op.h, w = op.w, gs = std::max<long>(op.grid_spacing, 1);
      long ch = h / gs + 2, cw = w / gs + 2;
      // smooth displacement field: coarse control grid, bilinearly upsampled
      Eigen::MatrixXd dy(ch, cw), dx(ch, cw);
      std::normal_distribution<double> nd(0.0, 1.0);
      for (long i = 0; i < ch; ++i)
        for (long j = 0; j < cw; ++j) {
          dy(i, j) = op.amplitude * nd(rng);
          dx(i, j) = op.amplitude * nd(rng);
        }
      auto field = [&](const Eigen::MatrixXd& f, double r, double c) {
        double gr = r / double(gs), gc = c / double(gs);
        long i = std::min(static_cast<long>(gr), ch - 2);
        long j = std::min(static_cast<long>(gc), cw - 2);
        double tr = gr - i, tc = gc - j;
        return (1 - tr) * (1 - tc) * f(i, j) + (1 - tr) * tc * f(i, j + 1) +
               tr * (1 - tc) * f(i + 1, j) + tr * tc * f(i + 1, j + 1);
      };
      auto sample = [&](double r, double c) {
        r = std::min(std::max(r, 0.0), double(h - 1));
        c = std::min(std::max(c, 0.0), double(w - 1));
        long i = std::min(static_cast<long>(r), h - 2 >= 0 ? h - 2 : 0);
        long j = std::min(static_cast<long>(c), w - 2 >= 0 ? w - 2 : 0);
        double tr = r - i, tc = c - j;
        long i1 = std::min(i + 1, h - 1), j1 = std::min(j + 1, w - 1);
        return (1 - tr) * (1 - tc) * x[i * w + j] + (1 - tr) * tc * x[i * w + j1] +
               tr * (1 - tc) * x[i1 * w + j] + tr * tc * x[i1 * w + j1];
      };
      Eigen::VectorXd out(h * w);
      for (long i = 0; i < h; ++i)
        for (long j = 0; j < w; ++j)
          out[i * w + j] = sample(i + field(dy, i, j), j + field(dx, i, j));
      return out;
    }

    case TransitionOp::kModeJump: {
      if (op.teleport_modes.empty())
        throw std::invalid_argument("apply_transition: mode_jump needs teleport targets");
      std::uniform_int_distribution<size_t> pick(0, op.teleport_modes.size() - 1);
      Eigen::VectorXd target = op.teleport_modes[pick(rng)];
      if (target.size() != x.size())
        throw std::invalid_argument("apply_transition: teleport target dimension mismatch");
      if (op.teleport_jitter > 0.0) target += op.teleport_jitter * draw_normal(x.size(), rng);
      return target;
    }
  }
  throw std::logic_error("apply_transition: unknown kind");
}

std::pair<Eigen::VectorXd, ChainStats> run_chain(const Eigen::VectorXd& init,
                                                 const EnergyModel& model,
                                                 const SamplerConfig& config,
                                                 std::mt19937_64& rng) {
  Eigen::VectorXd x = init;
  apply_clamp(x, config.clamp);
  ChainStats stats;
  double energy_sum = 0.0;
  long accepted = 0;
  if (config.record_trajectory) stats.trajectory.push_back(x);
  for (long s = 0; s < config.steps; ++s) {
    if (config.augmentation && config.augmentation->period > 0 && s > 0 &&
        s % config.augmentation->period == 0) {
      x = apply_transition(x, config.augmentation->op, rng);
      apply_clamp(x, config.clamp);
    }
    if (config.adjusted) {
      auto [next, ok] = mala_step(x, model, config.step_size, rng);
      x = next;
      accepted += ok ? 1 : 0;
    } else {
      x = langevin_step(x, model, config.step_size, config.noise_std, rng);
    }
    apply_clamp(x, config.clamp);
    if (!x.allFinite()) nonfinite_error("run_chain", x, model.value(init));
    double e = model.value(x);
    energy_sum += e;
    if (config.record_energy_trace) stats.energy_trace.push_back(e);
    if (config.record_trajectory) stats.trajectory.push_back(x);
  }
  stats.mean_energy = config.steps > 0 ? energy_sum / double(config.steps) : model.value(x);
  stats.final_energy = model.value(x);
  stats.accept_rate = config.adjusted && config.steps > 0
                          ? double(accepted) / double(config.steps)
                          : 0.0;
  return {x, stats};
}

DifferentiableChainResult run_chain_differentiable(const Eigen::VectorXd& init,
                                                   const EnergyModel& model,
                                                   const SamplerConfig& config, long k_backprop,
                                                   std::mt19937_64& rng, long tape_state_limit) {
  if (k_backprop < 0 || k_backprop > config.steps)
    throw std::invalid_argument("run_chain_differentiable: k_backprop must be in [0, steps]");
  if (k_backprop * init.size() > tape_state_limit)
    throw std::invalid_argument("run_chain_differentiable: tape memory guard exceeded (" +
                                std::to_string(k_backprop * init.size()) + " > " +
                                std::to_string(tape_state_limit) + ")");
  SamplerConfig prefix = config;
  prefix.steps = config.steps - k_backprop;
  auto [x, stats] = run_chain(init, model, prefix, rng);
  (void)stats;

  // The entry state is constant w.r.t. theta but must carry gradient so
  // that d(E)/d(state) exists inside each recorded step.
  NodePtr xn = leaf(Tensor::from_vector(x), "chain_state", true);
  for (long s = 0; s < k_backprop; ++s) {
    NodePtr e = model.build(xn);
    NodePtr g = gradient(e, {xn})[0];
    Eigen::VectorXd noise = config.noise_std * draw_normal(x.size(), rng);
    xn = add(sub(xn, mul(constant(0.5 * config.step_size), g)),
             constant(Tensor::from_vector(noise)));
  }
  return {xn, xn->value.as_vector()};
}

void write_trajectory_csv(const std::vector<Eigen::VectorXd>& trajectory,
                          const EnergyModel* model_for_energy, std::ostream& os) {
  if (trajectory.empty()) return;
  bool wide = trajectory[0].size() <= 16;
  os << "step";
  if (wide)
    for (long d = 0; d < trajectory[0].size(); ++d) os << ",dim" << d;
  if (model_for_energy) os << ",energy";
  os << "\n";
  for (size_t s = 0; s < trajectory.size(); ++s) {
    os << s;
    if (wide)
      for (long d = 0; d < trajectory[s].size(); ++d) os << "," << trajectory[s][d];
    if (model_for_energy) os << "," << model_for_energy->value(trajectory[s]);
    os << "\n";
  }
}

}  // namespace ebmforge

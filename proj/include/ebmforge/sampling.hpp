#pragma once

#include <ebmforge/energies.hpp>

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace ebmforge {

struct BoxClamp {
  Eigen::VectorXd lo, hi;
};

struct TransitionOp {
  enum Kind { kGaussianJitter, kElasticDeformation, kModeJump };
  Kind kind = kGaussianJitter;
  double scale = 0.0;  // jitter std

  // elastic deformation (2-D raster layout required)
  long grid_spacing = 4;
  double amplitude = 0.0;  // displacement std, in pixels
  long h = 0, w = 0;

  // mode jump: teleport among the given centers with optional jitter
  std::vector<Eigen::VectorXd> teleport_modes;
  double teleport_jitter = 0.0;
};

struct AugmentationConfig {
  TransitionOp op;
  long period = 100;
};

// Step size and noise are independent knobs (practical mode); the
// theoretical coupling sigma = sqrt(lambda) is a helper. Step sizes far
// above the theoretical coupling are not a valid MCMC approximation.
struct SamplerConfig {
  double step_size = 0.01;  // lambda
  double noise_std = 0.1;   // sigma
  long steps = 60;
  bool adjusted = false;  // MALA (uses the theoretical coupling internally)
  std::optional<BoxClamp> clamp;
  std::optional<AugmentationConfig> augmentation;
  bool record_energy_trace = false;
  bool record_trajectory = false;

  static double theoretical_noise(double lambda) { return std::sqrt(lambda); }
};

struct Chain {
  Eigen::VectorXd state;
  long age = 0;
  long accepted = 0;
  long proposals = 0;
};

struct ChainStats {
  double mean_energy = 0.0;
  double final_energy = 0.0;
  double accept_rate = 0.0;
  std::vector<double> energy_trace;
  std::vector<Eigen::VectorXd> trajectory;
};

// x' = x - (lambda/2) grad_x E(x) + N(0, sigma^2 I). Always consumes d
// normal draws so the stream layout is independent of sigma.
Eigen::VectorXd langevin_step(const Eigen::VectorXd& x, const EnergyModel& model, double lambda,
                              double sigma, std::mt19937_64& rng);

// Log Metropolis acceptance ratio for the Langevin proposal with the
// theoretical noise coupling.
double mala_log_acceptance(const EnergyModel& model, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y, double lambda);

std::pair<Eigen::VectorXd, bool> mala_step(const Eigen::VectorXd& x, const EnergyModel& model,
                                           double lambda, std::mt19937_64& rng);

Eigen::VectorXd apply_transition(const Eigen::VectorXd& x, const TransitionOp& op,
                                 std::mt19937_64& rng);

std::pair<Eigen::VectorXd, ChainStats> run_chain(const Eigen::VectorXd& init,
                                                 const EnergyModel& model,
                                                 const SamplerConfig& config,
                                                 std::mt19937_64& rng);

struct DifferentiableChainResult {
  NodePtr final_node;  // depends on the model's parameter leaves
  Eigen::VectorXd final_value;
};

// Runs the chain with the first (steps - k_backprop) steps numeric and the
// last k_backprop steps on the tape, with reparameterized noise recorded
// as constants. Gradients of any scalar of final_node w.r.t. theta flow
// through grad_x E inside each recorded step (second order). Clamping and
// augmentation apply to the numeric prefix only.
DifferentiableChainResult run_chain_differentiable(const Eigen::VectorXd& init,
                                                   const EnergyModel& model,
                                                   const SamplerConfig& config, long k_backprop,
                                                   std::mt19937_64& rng,
                                                   long tape_state_limit = 1 << 20);

// CSV trajectory dump: step, coordinates (or just energy when states are
// large); used behind the CLI --trace flag.
void write_trajectory_csv(const std::vector<Eigen::VectorXd>& trajectory,
                          const EnergyModel* model_for_energy, std::ostream& os);

}  // namespace ebmforge

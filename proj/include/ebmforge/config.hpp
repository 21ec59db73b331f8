#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebmforge {

// Experiment description as plain values; factories in lab.hpp turn it
// into live objects. Serialized as dotted key = value lines; every key is
// also a --key=value override, unknown keys are rejected, and the
// serialize -> parse -> serialize cycle is a fixed point.
struct ExperimentConfig {
  // dataset
  std::string dataset_variant = "mixture2d";  // mixture2d | rings2d | synthetic_digits | idx_file
  long dataset_modes = 8;
  double dataset_sigma = 0.2;
  double dataset_radius = 4.0;
  long dataset_size = 10000;
  std::string dataset_path;
  bool dataset_downsample = false;

  // energy
  std::string energy_kind = "mlp";  // mlp | quadratic | grid
  std::string energy_hidden = "32,32";
  bool energy_spectral_norm = false;
  double energy_confine = 0.0;  // adds a fixed (1/2) w |x|^2 term; 0 = off
  long energy_grid_res = 16;
  double energy_box_lo = -6.0;
  double energy_box_hi = 6.0;

  // sampler
  double sampler_step_size = 0.01;
  double sampler_noise_std = 0.05;
  long sampler_steps = 60;
  bool sampler_adjusted = false;
  std::string sampler_augment = "none";  // none | jitter | mode_jump
  long sampler_augment_period = 20;
  double sampler_augment_scale = 0.1;

  // chain-init policy
  std::string init_policy = "noise_reservoir";  // data_cd | persistent | noise_reservoir
  double init_reinit_prob = 0.01;
  long init_capacity = 10000;
  std::string init_noise = "uniform";  // uniform | gaussian
  double init_noise_lo = -6.0;
  double init_noise_hi = 6.0;
  double init_noise_sigma = 1.0;

  // objective
  std::string objective_variant = "cd_star";  // exact_nll | mcmc_nll | cd_star | cd_kl
  std::string objective_kl_sign = "correct";  // correct | flipped
  double objective_kl_weight = 0.0;
  long objective_k_backprop = 0;
  long objective_entropy_bank = 256;
  double objective_grid_lo = -8.0;
  double objective_grid_hi = 8.0;
  long objective_grid_nodes = 301;

  // optimizer
  double optimizer_lr = 1e-4;
  double optimizer_beta1 = 0.0;
  double optimizer_beta2 = 0.999;
  double optimizer_eps = 1e-8;
  double optimizer_grad_clip = 0.1;

  // run
  long train_steps = 1000;
  long train_batch = 32;
  std::uint64_t train_seed = 0;
  std::string train_output_dir;
  long train_checkpoint_every = 0;  // 0 = off
  long train_audit_every = 0;       // oracle-cosine audit cadence, 0 = off

  void set(const std::string& key, const std::string& value);  // unknown key throws
  std::string get(const std::string& key) const;
  static std::vector<std::string> keys();

  std::string serialize() const;
  static ExperimentConfig parse(std::istream& is);
  static ExperimentConfig parse_string(const std::string& text);
  void apply_overrides(const std::vector<std::string>& key_equals_value);
  void validate() const;
};

// Default seed for fresh configs: EBMFORGE_SEED when set, else 0.
std::uint64_t default_seed_from_env();

}  // namespace ebmforge

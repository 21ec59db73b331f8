#pragma once

#include <ebmforge/config.hpp>
#include <ebmforge/datasets.hpp>
#include <ebmforge/energies.hpp>
#include <ebmforge/objectives.hpp>
#include <ebmforge/replay.hpp>
#include <ebmforge/sampling.hpp>

#include <Eigen/Core>

#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ebmforge {

struct AdamHyper {
  double lr = 1e-4;
  double beta1 = 0.0;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 0.1;

  static AdamHyper from_config(const ExperimentConfig& cfg);
};

struct AdamState {
  long t = 0;
  Eigen::VectorXd m, v;
  long skipped = 0;
};

// Globally clips the gradient to L2 norm <= grad_clip, then applies a
// bias-corrected Adam update in place. Returns false (and counts a skip)
// on a non-finite gradient, leaving params untouched. post_clip_norm
// reports the norm actually used.
bool adam_step(Eigen::VectorXd& params, Eigen::VectorXd grad, AdamState& state,
               const AdamHyper& hyper, double* post_clip_norm = nullptr);

struct MetricsRecord {
  long step = 0;
  double positive_norm = 0, negative_norm = 0, kl_entropy_norm = 0, kl_opt_norm = 0;
  double total_norm = 0, post_clip_norm = 0;
  double data_energy = 0, sample_energy = 0;
  std::optional<double> mode_coverage;
  std::optional<double> mixing_rate;
  std::optional<double> oracle_cosine;
  double wall_time = 0;  // seconds; excluded from determinism comparisons
};

enum class MetricsFormat { kCsv, kJsonl };

void emit_metrics(const std::vector<MetricsRecord>& log, MetricsFormat format, std::ostream& os);
std::vector<MetricsRecord> parse_metrics(MetricsFormat format, std::istream& is);
bool metrics_equal_ignoring_time(const std::vector<MetricsRecord>& a,
                                 const std::vector<MetricsRecord>& b);

// Fraction of modes that have at least one sample within radius.
double mode_coverage(const std::vector<Eigen::VectorXd>& samples,
                     const std::vector<Eigen::VectorXd>& modes, double radius);

// Nearest-mode membership changes along the trajectory, per 1000 steps.
double mixing_rate(const std::vector<Eigen::VectorXd>& trajectory,
                   const std::vector<Eigen::VectorXd>& modes);

// Runs chains from both init sets; success means the final energy reaches
// the median energy of the data inits (final <= median + delta).
struct SpuriousMinimaReport {
  double noise_fraction = 0;
  double data_fraction = 0;
  double data_energy_median = 0;
  double delta = 0;
};

SpuriousMinimaReport spurious_minima_probe(const EnergyModel& model,
                                           const std::vector<Eigen::VectorXd>& noise_inits,
                                           const std::vector<Eigen::VectorXd>& data_inits,
                                           const SamplerConfig& sampler, double delta,
                                           std::mt19937_64& rng);

// Config -> live objects.
std::unique_ptr<EnergyModel> make_energy(const ExperimentConfig& cfg, long dim);
SamplerConfig make_sampler_config(const ExperimentConfig& cfg, const Dataset& dataset);
InitPolicy make_init_policy(const ExperimentConfig& cfg,
                            std::shared_ptr<const std::vector<Eigen::VectorXd>> data, long dim);
ObjectiveSpec make_objective_spec(const ExperimentConfig& cfg, long dim);

// Checkpoints: "EBMC" magic, version u32, then step, params, optimizer
// state, rng stream state, embedded reservoir snapshot, and bank entries.
struct Checkpoint {
  long step = 0;
  Eigen::VectorXd params;
  AdamState adam;
  std::string rng_state;
  std::string reservoir_snapshot;  // EBMR block
  std::vector<Eigen::VectorXd> bank_entries;
};

void save_checkpoint(std::ostream& os, const Checkpoint& c);
Checkpoint load_checkpoint(std::istream& is);

struct TrainResult {
  std::shared_ptr<EnergyModel> model;
  std::vector<MetricsRecord> metrics;
  Dataset dataset;
  std::shared_ptr<Reservoir> reservoir;
};

// The training loop: data batch -> chain inits from the reservoir ->
// chains -> gradient estimate -> Adam -> finals pushed back. Checkpoints
// land in train.output_dir every train.checkpoint_every steps; resuming
// from one reproduces the uninterrupted run bit-exactly.
TrainResult train(const ExperimentConfig& cfg, const std::string& resume_checkpoint = "");

}  // namespace ebmforge

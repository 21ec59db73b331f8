#pragma once

#include <ebmforge/energies.hpp>
#include <ebmforge/replay.hpp>
#include <ebmforge/sampling.hpp>

#include <Eigen/Core>

#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ebmforge {

// Tensor-product trapezoid quadrature over a box (d <= 2).
struct QuadratureGrid {
  Eigen::VectorXd lo, hi;
  long nodes_per_dim = 512;
  bool simpson = false;

  static QuadratureGrid box1d(double lo, double hi, long nodes);
  static QuadratureGrid box2d(double lo, double hi, long nodes);
};

struct ObjectiveSpec {
  enum Variant { kExactNLL, kMCMCNLL, kCDStar, kCDWithKL };
  enum KlSign { kCorrect, kFlipped };

  Variant variant = kCDStar;
  KlSign kl_sign = kCorrect;
  double kl_weight = 0.0;
  long k_backprop = 0;
  long entropy_bank_size = 256;
  QuadratureGrid grid;  // exact-NLL only
};

const char* objective_variant_name(const ObjectiveSpec& spec);

// Per-phase parameter gradients, each flattened in the model's parameter
// order. total = positive + negative_or_divergence
//               + kl_weight * (kl_entropy + kl_opt).
struct GradientEstimate {
  Eigen::VectorXd positive;
  Eigen::VectorXd negative_or_divergence;
  Eigen::VectorXd kl_entropy;
  Eigen::VectorXd kl_opt;
  Eigen::VectorXd total;
  std::vector<Eigen::VectorXd> samples;  // chain finals (MCMC variants)
};

// Bounded FIFO of recent negative samples; the entropy loss repels new
// samples from these (they are held constant).
class SampleBank {
 public:
  explicit SampleBank(long capacity);
  long capacity() const { return capacity_; }
  long size() const { return static_cast<long>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const std::deque<Eigen::VectorXd>& entries() const { return entries_; }
  void push(const std::vector<Eigen::VectorXd>& samples);

 private:
  long capacity_;
  std::deque<Eigen::VectorXd> entries_;
};

// (1/n) sum_i grad_theta E(x_i) over the data batch.
Eigen::VectorXd positive_phase_grad(const EnergyModel& model,
                                    const std::vector<Eigen::VectorXd>& data_batch);

// -(1/m) sum_j grad_theta E(x_j) over detached samples.
Eigen::VectorXd negative_phase_grad(const EnergyModel& model,
                                    const std::vector<Eigen::VectorXd>& sample_batch);

// log integral of e^{-E} over the grid box. Throws when the boundary
// carries more than 1e-6 of the estimated mass (box too small).
double exact_log_partition(const EnergyModel& model, const QuadratureGrid& grid);

// E_data[grad_theta E] - E_model[grad_theta E], the model expectation
// taken by quadrature rather than sampling.
Eigen::VectorXd exact_nll_grad(const EnergyModel& model,
                               const std::vector<Eigen::VectorXd>& data_batch,
                               const QuadratureGrid& grid);

// (1/n) sum_i log(n * NN(x_i, X \ {x_i})), Euclidean leave-one-out
// nearest-neighbor distances with an eps floor inside the log. The
// theta-independent constant of the underlying entropy estimator is
// dropped; knn_entropy_bias recovers it against a uniform reference.
double knn_entropy(const std::vector<Eigen::VectorXd>& samples);
double knn_entropy_bias(long n, long dim, std::mt19937_64& rng);

// Gradient w.r.t. theta of -mean_j log NN(x_j(theta), bank), flowing
// through the differentiable sampling tails; bank entries are constants.
Eigen::VectorXd entropy_repel_grad(const std::vector<NodePtr>& finals,
                                   const std::vector<Eigen::VectorXd>& bank,
                                   const EnergyModel& model);

// Gradient w.r.t. theta of -mean_j E_frozen(x_j(theta)): the energy's own
// parameters are frozen, only the chain path is live.
Eigen::VectorXd kl_opt_grad(const EnergyModel& model, const std::vector<NodePtr>& finals);

// Full estimator. MCMC variants draw chain inits from the reservoir and
// push the finals back; reservoir may be null for ExactNLL only. The bank,
// when given, supplies past samples for the entropy term and receives the
// new finals; without one (or while empty) the entropy term uses the other
// chains of the current batch.
GradientEstimate compute_gradient(const ObjectiveSpec& spec, const EnergyModel& model,
                                  const std::vector<Eigen::VectorXd>& data_batch,
                                  Reservoir* reservoir, const SamplerConfig& sampler,
                                  std::mt19937_64& rng, SampleBank* bank = nullptr);

// Discrete circulation of a 2-D gradient field around an axis-aligned
// square (counterclockwise). Conservative fields give ~0; path-dependent
// update rules do not have to.
double gradient_field_circulation(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field,
    const Eigen::Vector2d& center, double half_width, long steps_per_edge);

// One JSON line per training step for offline auditing.
void write_grad_audit_record(std::ostream& os, long step, const std::string& variant,
                             const GradientEstimate& estimate,
                             std::optional<double> cosine_vs_oracle);

}  // namespace ebmforge

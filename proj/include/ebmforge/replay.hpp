#pragma once

#include <Eigen/Core>

#include <deque>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

namespace ebmforge {

struct NoiseDist {
  enum Kind { kUniformBox, kGaussian };
  Kind kind = kUniformBox;
  long dim = 0;
  Eigen::VectorXd lo, hi;   // uniform box
  Eigen::VectorXd mean;     // gaussian
  double sigma = 1.0;

  static NoiseDist uniform_box(long dim, double lo = 0.0, double hi = 1.0);
  static NoiseDist gaussian(long dim, double sigma = 1.0);
  Eigen::VectorXd draw(std::mt19937_64& rng) const;
};

// Chain-initialization policy. The three regimes differ only in where the
// buffer is seeded from and what a probabilistic reinit draws:
//   DataCD         - seeded from data; reinit draws fresh data (classic
//                    CD-t when reinit_prob == 1)
//   Persistent     - seeded from data; reinit draws fresh data (rare)
//   NoiseReservoir - seeded from noise; reinit draws fresh noise
struct InitPolicy {
  enum Variant { kDataCD, kPersistent, kNoiseReservoir };
  Variant variant = kNoiseReservoir;
  double reinit_prob = 0.01;
  NoiseDist noise;
  std::shared_ptr<const std::vector<Eigen::VectorXd>> dataset;

  static InitPolicy data_cd(std::shared_ptr<const std::vector<Eigen::VectorXd>> data,
                            double reset_prob = 0.1);
  static InitPolicy persistent(std::shared_ptr<const std::vector<Eigen::VectorXd>> data,
                               double reset_to_data_prob = 0.0);
  static InitPolicy noise_reservoir(NoiseDist noise, double noise_reinit_prob = 0.01);
};

// Bounded FIFO of chain states with the policy's probabilistic reinit on
// sampling. Filled to capacity on construction.
class Reservoir {
 public:
  Reservoir(InitPolicy policy, long capacity, std::mt19937_64& rng);

  long capacity() const { return capacity_; }
  long size() const { return static_cast<long>(storage_.size()); }
  long dim() const { return dim_; }
  const InitPolicy& policy() const { return policy_; }
  const std::deque<Eigen::VectorXd>& storage() const { return storage_; }

  // Uniform draws from storage; each one independently replaced by a
  // fresh policy draw with probability reinit_prob. Returned states are
  // copies.
  std::vector<Eigen::VectorXd> sample_inits(long batch_size, std::mt19937_64& rng);

  // FIFO append; evicts the oldest entries beyond capacity.
  void push_finals(const std::vector<Eigen::VectorXd>& finals);

  // Snapshot format: "EBMR", version u32, capacity u32, dim u32, then
  // capacity*dim little-endian f64.
  void save(std::ostream& os) const;
  static Reservoir load(std::istream& is, InitPolicy policy);

 private:
  Eigen::VectorXd fresh_draw(std::mt19937_64& rng) const;

  InitPolicy policy_;
  long capacity_;
  long dim_;
  std::deque<Eigen::VectorXd> storage_;
};

}  // namespace ebmforge

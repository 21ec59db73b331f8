#include <ebmforge/replay.hpp>

#include <ebmforge/binio.hpp>

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ebmforge {

namespace {

constexpr char kMagic[4] = {'E', 'B', 'M', 'R'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

NoiseDist NoiseDist::uniform_box(long dim, double lo, double hi) {
  NoiseDist d;
  d.kind = kUniformBox;
  d.dim = dim;
  d.lo = Eigen::VectorXd::Constant(dim, lo);
  d.hi = Eigen::VectorXd::Constant(dim, hi);
  return d;
}

NoiseDist NoiseDist::gaussian(long dim, double sigma) {
  NoiseDist d;
  d.kind = kGaussian;
  d.dim = dim;
  d.mean = Eigen::VectorXd::Zero(dim);
  d.sigma = sigma;
  return d;
}

Eigen::VectorXd NoiseDist::draw(std::mt19937_64& rng) const {
  if (dim <= 0) throw std::invalid_argument("NoiseDist: dim must be positive");
  Eigen::VectorXd v(dim);
  if (kind == kUniformBox) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (long i = 0; i < dim; ++i) v[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
  } else {
    std::normal_distribution<double> n(0.0, 1.0);
    for (long i = 0; i < dim; ++i) v[i] = mean[i] + sigma * n(rng);
  }
  return v;
}

InitPolicy InitPolicy::data_cd(std::shared_ptr<const std::vector<Eigen::VectorXd>> data,
                               double reset_prob) {
  InitPolicy p;
  p.variant = kDataCD;
  p.reinit_prob = reset_prob;
  p.dataset = std::move(data);
  return p;
}

InitPolicy InitPolicy::persistent(std::shared_ptr<const std::vector<Eigen::VectorXd>> data,
                                  double reset_to_data_prob) {
  InitPolicy p;
  p.variant = kPersistent;
  p.reinit_prob = reset_to_data_prob;
  p.dataset = std::move(data);
  return p;
}

InitPolicy InitPolicy::noise_reservoir(NoiseDist noise, double noise_reinit_prob) {
  InitPolicy p;
  p.variant = kNoiseReservoir;
  p.reinit_prob = noise_reinit_prob;
  p.noise = std::move(noise);
  return p;
}

Reservoir::Reservoir(InitPolicy policy, long capacity, std::mt19937_64& rng)
    : policy_(std::move(policy)), capacity_(capacity) {
  if (capacity_ <= 0) throw std::invalid_argument("Reservoir: capacity must be positive");
  if (policy_.reinit_prob < 0.0 || policy_.reinit_prob > 1.0)
    throw std::invalid_argument("Reservoir: reinit_prob must be in [0, 1]");
  if (policy_.variant == InitPolicy::kNoiseReservoir) {
    dim_ = policy_.noise.dim;
  } else {
    if (!policy_.dataset || policy_.dataset->empty())
      throw std::invalid_argument("Reservoir: data-seeded policy needs a non-empty dataset");
    dim_ = (*policy_.dataset)[0].size();
  }
  for (long i = 0; i < capacity_; ++i) storage_.push_back(fresh_draw(rng));
}

Eigen::VectorXd Reservoir::fresh_draw(std::mt19937_64& rng) const {
  if (policy_.variant == InitPolicy::kNoiseReservoir) return policy_.noise.draw(rng);
  std::uniform_int_distribution<size_t> pick(0, policy_.dataset->size() - 1);
  return (*policy_.dataset)[pick(rng)];
}

std::vector<Eigen::VectorXd> Reservoir::sample_inits(long batch_size, std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(batch_size);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<size_t> pick(0, storage_.size() - 1);
  for (long b = 0; b < batch_size; ++b) {
    if (coin(rng) < policy_.reinit_prob)
      out.push_back(fresh_draw(rng));
    else
      out.push_back(storage_[pick(rng)]);
  }
  return out;
}

void Reservoir::push_finals(const std::vector<Eigen::VectorXd>& finals) {
  for (const auto& f : finals) {
    if (f.size() != dim_)
      throw std::invalid_argument("Reservoir::push_finals: dimension mismatch");
    storage_.push_back(f);
    if (static_cast<long>(storage_.size()) > capacity_) storage_.pop_front();
  }
}

void Reservoir::save(std::ostream& os) const {
  os.write(kMagic, 4);
  binio::write_u32(os, kVersion);
  binio::write_u32(os, static_cast<std::uint32_t>(capacity_));
  binio::write_u32(os, static_cast<std::uint32_t>(dim_));
  for (const auto& s : storage_)
    for (long i = 0; i < dim_; ++i) binio::write_f64(os, s[i]);
  if (!os) throw std::runtime_error("reservoir snapshot: write failed");
}

Reservoir Reservoir::load(std::istream& is, InitPolicy policy) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("reservoir snapshot: bad magic");
  std::uint32_t version = binio::read_u32(is, "reservoir snapshot");
  if (version != kVersion)
    throw std::runtime_error("reservoir snapshot: unsupported version " + std::to_string(version));
  long capacity = static_cast<long>(binio::read_u32(is, "reservoir snapshot"));
  long dim = static_cast<long>(binio::read_u32(is, "reservoir snapshot"));

  // Construct with a throwaway stream, then overwrite with the snapshot.
  std::mt19937_64 scratch(0);
  Reservoir r(std::move(policy), capacity, scratch);
  if (r.dim_ != dim)
    throw std::runtime_error("reservoir snapshot: dimension mismatch (policy dim " +
                             std::to_string(r.dim_) + ", snapshot dim " + std::to_string(dim) + ")");
  r.storage_.clear();
  for (long c = 0; c < capacity; ++c) {
    Eigen::VectorXd s(dim);
    for (long i = 0; i < dim; ++i) s[i] = binio::read_f64(is, "reservoir snapshot");
    r.storage_.push_back(std::move(s));
  }
  return r;
}

}  // namespace ebmforge

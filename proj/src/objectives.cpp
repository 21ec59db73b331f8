#include <ebmforge/objectives.hpp>

#include <json.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ebmforge {

namespace {

Eigen::VectorXd flatten_grads(const std::vector<NodePtr>& grads, long total) {
  Eigen::VectorXd out(total);
  long off = 0;
  for (const auto& g : grads) {
    out.segment(off, g->value.size()) = g->value.as_vector();
    off += g->value.size();
  }
  if (off != total) throw std::logic_error("flatten_grads: parameter size mismatch");
  return out;
}

// Quadrature node weights on [lo, hi] with n nodes (log scale).
std::vector<double> quad_log_weights(double lo, double hi, long n, bool simpson) {
  if (n < 2) throw std::invalid_argument("quadrature: need at least 2 nodes per dim");
  double h = (hi - lo) / double(n - 1);
  std::vector<double> w(n);
  if (simpson) {
    if (n % 2 == 0) throw std::invalid_argument("quadrature: Simpson rule needs an odd node count");
    for (long i = 0; i < n; ++i)
      w[i] = (i == 0 || i == n - 1) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  } else {
    for (long i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? h / 2.0 : h;
  }
  for (auto& x : w) x = std::log(x);
  return w;
}

// Visits every grid node with its coordinates, log weight, and whether it
// lies on the box boundary.
template <typename F>
void for_each_node(const EnergyModel& model, const QuadratureGrid& grid, F&& fn) {
  long d = model.dim();
  if (d < 1 || d > 2)
    throw std::invalid_argument("quadrature: only 1-D and 2-D energies are supported");
  if (grid.lo.size() != d || grid.hi.size() != d)
    throw std::invalid_argument("quadrature: grid box dimension mismatch");
  long n = grid.nodes_per_dim;
  if (d == 1) {
    auto w = quad_log_weights(grid.lo[0], grid.hi[0], n, grid.simpson);
    double h = (grid.hi[0] - grid.lo[0]) / double(n - 1);
    Eigen::VectorXd x(1);
    for (long i = 0; i < n; ++i) {
      x[0] = grid.lo[0] + i * h;
      fn(x, w[i], i == 0 || i == n - 1);
    }
  } else {
    auto w0 = quad_log_weights(grid.lo[0], grid.hi[0], n, grid.simpson);
    auto w1 = quad_log_weights(grid.lo[1], grid.hi[1], n, grid.simpson);
    double h0 = (grid.hi[0] - grid.lo[0]) / double(n - 1);
    double h1 = (grid.hi[1] - grid.lo[1]) / double(n - 1);
    Eigen::VectorXd x(2);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        x[0] = grid.lo[0] + i * h0;
        x[1] = grid.lo[1] + j * h1;
        fn(x, w0[i] + w1[j], i == 0 || i == n - 1 || j == 0 || j == n - 1);
      }
  }
}

}  // namespace

QuadratureGrid QuadratureGrid::box1d(double lo, double hi, long nodes) {
  QuadratureGrid g;
  g.lo = Eigen::VectorXd::Constant(1, lo);
  g.hi = Eigen::VectorXd::Constant(1, hi);
  g.nodes_per_dim = nodes;
  return g;
}

QuadratureGrid QuadratureGrid::box2d(double lo, double hi, long nodes) {
  QuadratureGrid g;
  g.lo = Eigen::VectorXd::Constant(2, lo);
  g.hi = Eigen::VectorXd::Constant(2, hi);
  g.nodes_per_dim = nodes;
  return g;
}

const char* objective_variant_name(const ObjectiveSpec& spec) {
  switch (spec.variant) {
    case ObjectiveSpec::kExactNLL: return "exact_nll";
    case ObjectiveSpec::kMCMCNLL: return "mcmc_nll";
    case ObjectiveSpec::kCDStar: return "cd_star";
    case ObjectiveSpec::kCDWithKL:
      return spec.kl_sign == ObjectiveSpec::kCorrect ? "cd_kl_correct" : "cd_kl_flipped";
  }
  return "unknown";
}

SampleBank::SampleBank(long capacity) : capacity_(capacity) {
  if (capacity_ <= 0) throw std::invalid_argument("SampleBank: capacity must be positive");
}

void SampleBank::push(const std::vector<Eigen::VectorXd>& samples) {
  for (const auto& s : samples) {
    entries_.push_back(s);
    if (static_cast<long>(entries_.size()) > capacity_) entries_.pop_front();
  }
}

Eigen::VectorXd positive_phase_grad(const EnergyModel& model,
                                    const std::vector<Eigen::VectorXd>& data_batch) {
  if (data_batch.empty()) throw std::invalid_argument("positive_phase_grad: empty batch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(model.param_count());
  for (const auto& x : data_batch) g += model.grad_theta(x);
  return g / double(data_batch.size());
}

Eigen::VectorXd negative_phase_grad(const EnergyModel& model,
                                    const std::vector<Eigen::VectorXd>& sample_batch) {
  if (sample_batch.empty()) throw std::invalid_argument("negative_phase_grad: empty batch");
  return -positive_phase_grad(model, sample_batch);
}

double exact_log_partition(const EnergyModel& model, const QuadratureGrid& grid) {
  double max_term = -std::numeric_limits<double>::infinity();
  for_each_node(model, grid, [&](const Eigen::VectorXd& x, double logw, bool) {
    max_term = std::max(max_term, -model.value(x) + logw);
  });
  double total = 0.0, boundary = 0.0;
  for_each_node(model, grid, [&](const Eigen::VectorXd& x, double logw, bool edge) {
    double t = std::exp(-model.value(x) + logw - max_term);
    total += t;
    if (edge) boundary += t;
  });
  if (boundary / total > 1e-6)
    throw std::runtime_error("exact_log_partition: boundary carries " +
                             std::to_string(boundary / total) +
                             " of the mass; enlarge the quadrature box");
  return max_term + std::log(total);
}

Eigen::VectorXd exact_nll_grad(const EnergyModel& model,
                               const std::vector<Eigen::VectorXd>& data_batch,
                               const QuadratureGrid& grid) {
  double log_z = exact_log_partition(model, grid);
  Eigen::VectorXd expectation = Eigen::VectorXd::Zero(model.param_count());
  for_each_node(model, grid, [&](const Eigen::VectorXd& x, double logw, bool) {
    double p = std::exp(-model.value(x) + logw - log_z);
    expectation += p * model.grad_theta(x);
  });
  return positive_phase_grad(model, data_batch) - expectation;
}

double knn_entropy(const std::vector<Eigen::VectorXd>& samples) {
  long n = static_cast<long>(samples.size());
  if (n < 2) throw std::invalid_argument("knn_entropy: need at least 2 samples");
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (long j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (samples[i] - samples[j]).norm());
    }
    acc += std::log(double(n) * std::max(best, 1e-8));
  }
  return acc / double(n);
}

double knn_entropy_bias(long n, long dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples(n);
  for (long i = 0; i < n; ++i) {
    samples[i].resize(dim);
    for (long k = 0; k < dim; ++k) samples[i][k] = u(rng);
  }
  // Differential entropy of U[0,1]^d is 0, so the estimate is the bias.
  return knn_entropy(samples);
}

Eigen::VectorXd entropy_repel_grad(const std::vector<NodePtr>& finals,
                                   const std::vector<Eigen::VectorXd>& bank,
                                   const EnergyModel& model) {
  if (finals.empty()) throw std::invalid_argument("entropy_repel_grad: no samples");
  if (bank.empty()) throw std::invalid_argument("entropy_repel_grad: empty bank");
  NodePtr loss_sum;
  for (const auto& xj : finals) {
    Eigen::VectorXd xv = xj->value.as_vector();
    long best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < bank.size(); ++b) {
      double d = (xv - bank[b]).norm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<long>(b);
      }
    }
    NodePtr diff = sub(xj, constant(Tensor::from_vector(bank[best])));
    // smooth floor: sqrt(d^2 + 1e-16) keeps the log argument >= 1e-8
    NodePtr dist = sqrt(add(sum(square(diff)), constant(1e-16)));
    NodePtr lj = neg(log(dist));
    loss_sum = loss_sum ? add(loss_sum, lj) : lj;
  }
  NodePtr loss = mul(constant(1.0 / double(finals.size())), loss_sum);
  return flatten_grads(gradient(loss, model.param_leaves()), model.param_count());
}

Eigen::VectorXd kl_opt_grad(const EnergyModel& model, const std::vector<NodePtr>& finals) {
  if (finals.empty()) throw std::invalid_argument("kl_opt_grad: no samples");
  NodePtr e_sum;
  for (const auto& xj : finals) {
    NodePtr e = model.build(xj, /*detach_params=*/true);
    e_sum = e_sum ? add(e_sum, e) : e;
  }
  NodePtr loss = mul(constant(-1.0 / double(finals.size())), e_sum);
  return flatten_grads(gradient(loss, model.param_leaves()), model.param_count());
}

GradientEstimate compute_gradient(const ObjectiveSpec& spec, const EnergyModel& model,
                                  const std::vector<Eigen::VectorXd>& data_batch,
                                  Reservoir* reservoir, const SamplerConfig& sampler,
                                  std::mt19937_64& rng, SampleBank* bank) {
  if (spec.kl_weight < 0.0) throw std::invalid_argument("compute_gradient: kl_weight must be >= 0");
  long p = model.param_count();
  GradientEstimate est;
  est.kl_entropy = Eigen::VectorXd::Zero(p);
  est.kl_opt = Eigen::VectorXd::Zero(p);
  est.positive = positive_phase_grad(model, data_batch);

  if (spec.variant == ObjectiveSpec::kExactNLL) {
    est.negative_or_divergence = exact_nll_grad(model, data_batch, spec.grid) - est.positive;
    est.total = est.positive + est.negative_or_divergence;
    return est;
  }

  if (!reservoir)
    throw std::invalid_argument("compute_gradient: MCMC variants need a reservoir");
  long m = static_cast<long>(data_batch.size());
  bool need_kl = spec.variant == ObjectiveSpec::kCDWithKL && spec.kl_weight > 0.0 &&
                 spec.k_backprop > 0;

  auto inits = reservoir->sample_inits(m, rng);
  std::vector<Eigen::VectorXd> finals;
  std::vector<NodePtr> final_nodes;
  finals.reserve(m);
  for (const auto& init : inits) {
    if (need_kl) {
      auto r = run_chain_differentiable(init, model, sampler, spec.k_backprop, rng);
      finals.push_back(r.final_value);
      final_nodes.push_back(r.final_node);
    } else {
      finals.push_back(run_chain(init, model, sampler, rng).first);
    }
  }
  est.negative_or_divergence = negative_phase_grad(model, finals);

  if (need_kl) {
    Eigen::VectorXd repel;
    if (bank && !bank->empty()) {
      std::vector<Eigen::VectorXd> entries(bank->entries().begin(), bank->entries().end());
      repel = entropy_repel_grad(final_nodes, entries, model);
    } else if (m >= 2) {
      // no past samples yet: repel each chain from its batch peers
      repel = Eigen::VectorXd::Zero(p);
      for (long j = 0; j < m; ++j) {
        std::vector<Eigen::VectorXd> peers;
        for (long o = 0; o < m; ++o)
          if (o != j) peers.push_back(finals[o]);
        repel += entropy_repel_grad({final_nodes[j]}, peers, model);
      }
      repel /= double(m);
    } else {
      repel = Eigen::VectorXd::Zero(p);
    }
    Eigen::VectorXd opt = kl_opt_grad(model, final_nodes);
    double sign = spec.kl_sign == ObjectiveSpec::kCorrect ? 1.0 : -1.0;
    // correct CD: shrink the sampler's entropy (negated repel direction)
    // and raise energy through the chain; flipped negates both.
    est.kl_entropy = sign * -repel;
    est.kl_opt = sign * opt;
  }

  reservoir->push_finals(finals);
  if (bank) bank->push(finals);
  est.samples = std::move(finals);
  est.total = est.positive + est.negative_or_divergence +
              spec.kl_weight * (est.kl_entropy + est.kl_opt);
  return est;
}

double gradient_field_circulation(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field,
    const Eigen::Vector2d& center, double half_width, long steps_per_edge) {
  if (steps_per_edge < 1)
    throw std::invalid_argument("gradient_field_circulation: steps_per_edge must be >= 1");
  // counterclockwise square, midpoint rule per segment
  Eigen::Vector2d corners[5] = {
      center + Eigen::Vector2d(-half_width, -half_width),
      center + Eigen::Vector2d(half_width, -half_width),
      center + Eigen::Vector2d(half_width, half_width),
      center + Eigen::Vector2d(-half_width, half_width),
      center + Eigen::Vector2d(-half_width, -half_width),
  };
  double circ = 0.0;
  for (int e = 0; e < 4; ++e) {
    Eigen::Vector2d dl = (corners[e + 1] - corners[e]) / double(steps_per_edge);
    for (long s = 0; s < steps_per_edge; ++s) {
      Eigen::Vector2d mid = corners[e] + (double(s) + 0.5) * dl;
      circ += field(mid).dot(dl);
    }
  }
  return circ;
}

void write_grad_audit_record(std::ostream& os, long step, const std::string& variant,
                             const GradientEstimate& estimate,
                             std::optional<double> cosine_vs_oracle) {
  nlohmann::json j{
      {"step", step},
      {"variant", variant},
      {"positive_norm", estimate.positive.norm()},
      {"negative_norm", estimate.negative_or_divergence.norm()},
      {"kl_entropy_norm", estimate.kl_entropy.norm()},
      {"kl_opt_norm", estimate.kl_opt.norm()},
      {"total_norm", estimate.total.norm()},
  };
  if (cosine_vs_oracle) j["cosine_vs_oracle"] = *cosine_vs_oracle;
  os << j.dump() << "\n";
}

}  // namespace ebmforge

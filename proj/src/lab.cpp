#include <ebmforge/lab.hpp>

#include <ebmforge/binio.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ebmforge {

namespace {

constexpr char kCheckpointMagic[4] = {'E', 'B', 'M', 'C'};
constexpr std::uint32_t kCheckpointVersion = 1;

std::string fmt17(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {
      "step",       "positive_norm", "negative_norm", "kl_entropy_norm",
      "kl_opt_norm", "total_norm",   "post_clip_norm", "data_energy",
      "sample_energy", "mode_coverage", "mixing_rate", "oracle_cosine",
      "wall_time"};
  return cols;
}

std::vector<long> parse_hidden(const std::string& spec) {
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

long nearest_mode(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& modes) {
  long best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < modes.size(); ++k) {
    double d = (x - modes[k]).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<long>(k);
    }
  }
  return best;
}

}  // namespace

AdamHyper AdamHyper::from_config(const ExperimentConfig& cfg) {
  return {cfg.optimizer_lr, cfg.optimizer_beta1, cfg.optimizer_beta2, cfg.optimizer_eps,
          cfg.optimizer_grad_clip};
}

bool adam_step(Eigen::VectorXd& params, Eigen::VectorXd grad, AdamState& state,
               const AdamHyper& hyper, double* post_clip_norm) {
  if (grad.size() != params.size())
    throw std::invalid_argument("adam_step: gradient/parameter size mismatch");
  if (state.m.size() == 0) {
    state.m = Eigen::VectorXd::Zero(params.size());
    state.v = Eigen::VectorXd::Zero(params.size());
  }
  if (!grad.allFinite()) {
    ++state.skipped;
    if (post_clip_norm) *post_clip_norm = std::numeric_limits<double>::quiet_NaN();
    return false;
  }
  double n = grad.norm();
  if (hyper.grad_clip > 0.0 && n > hyper.grad_clip) {
    grad *= hyper.grad_clip / n;
    n = hyper.grad_clip;
  }
  if (post_clip_norm) *post_clip_norm = n;
  ++state.t;
  state.m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * grad;
  state.v = hyper.beta2 * state.v.array().matrix() +
            (1.0 - hyper.beta2) * grad.array().square().matrix();
  double bc1 = 1.0 - std::pow(hyper.beta1, double(state.t));
  double bc2 = 1.0 - std::pow(hyper.beta2, double(state.t));
  Eigen::ArrayXd mhat = state.m.array() / bc1;
  Eigen::ArrayXd vhat = state.v.array() / bc2;
  params.array() -= hyper.lr * mhat / (vhat.sqrt() + hyper.eps);
  return true;
}

void emit_metrics(const std::vector<MetricsRecord>& log, MetricsFormat format, std::ostream& os) {
  if (log.empty()) throw std::invalid_argument("emit_metrics: nothing to emit");
  auto opt_str = [](const std::optional<double>& o) { return o ? fmt17(*o) : std::string(); };
  if (format == MetricsFormat::kCsv) {
    const auto& cols = metric_columns();
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : log) {
      os << r.step << "," << fmt17(r.positive_norm) << "," << fmt17(r.negative_norm) << ","
         << fmt17(r.kl_entropy_norm) << "," << fmt17(r.kl_opt_norm) << "," << fmt17(r.total_norm)
         << "," << fmt17(r.post_clip_norm) << "," << fmt17(r.data_energy) << ","
         << fmt17(r.sample_energy) << "," << opt_str(r.mode_coverage) << ","
         << opt_str(r.mixing_rate) << "," << opt_str(r.oracle_cosine) << "," << fmt17(r.wall_time)
         << "\n";
    }
  } else {
    for (const auto& r : log) {
      nlohmann::json j{{"step", r.step},
                       {"positive_norm", r.positive_norm},
                       {"negative_norm", r.negative_norm},
                       {"kl_entropy_norm", r.kl_entropy_norm},
                       {"kl_opt_norm", r.kl_opt_norm},
                       {"total_norm", r.total_norm},
                       {"post_clip_norm", r.post_clip_norm},
                       {"data_energy", r.data_energy},
                       {"sample_energy", r.sample_energy},
                       {"mode_coverage", r.mode_coverage ? nlohmann::json(*r.mode_coverage)
                                                         : nlohmann::json(nullptr)},
                       {"mixing_rate", r.mixing_rate ? nlohmann::json(*r.mixing_rate)
                                                     : nlohmann::json(nullptr)},
                       {"oracle_cosine", r.oracle_cosine ? nlohmann::json(*r.oracle_cosine)
                                                         : nlohmann::json(nullptr)},
                       {"wall_time", r.wall_time}};
      os << j.dump() << "\n";
    }
  }
}

std::vector<MetricsRecord> parse_metrics(MetricsFormat format, std::istream& is) {
  std::vector<MetricsRecord> out;
  std::string line;
  if (format == MetricsFormat::kCsv) {
    if (!std::getline(is, line)) throw std::runtime_error("parse_metrics: empty input");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      cells.resize(metric_columns().size());
      MetricsRecord r;
      auto opt = [](const std::string& s) {
        return s.empty() ? std::optional<double>() : std::optional<double>(std::stod(s));
      };
      r.step = std::stol(cells[0]);
      r.positive_norm = std::stod(cells[1]);
      r.negative_norm = std::stod(cells[2]);
      r.kl_entropy_norm = std::stod(cells[3]);
      r.kl_opt_norm = std::stod(cells[4]);
      r.total_norm = std::stod(cells[5]);
      r.post_clip_norm = std::stod(cells[6]);
      r.data_energy = std::stod(cells[7]);
      r.sample_energy = std::stod(cells[8]);
      r.mode_coverage = opt(cells[9]);
      r.mixing_rate = opt(cells[10]);
      r.oracle_cosine = opt(cells[11]);
      r.wall_time = std::stod(cells[12]);
      out.push_back(r);
    }
  } else {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      MetricsRecord r;
      auto opt = [&](const char* k) {
        return j.at(k).is_null() ? std::optional<double>()
                                 : std::optional<double>(j.at(k).get<double>());
      };
      r.step = j.at("step").get<long>();
      r.positive_norm = j.at("positive_norm").get<double>();
      r.negative_norm = j.at("negative_norm").get<double>();
      r.kl_entropy_norm = j.at("kl_entropy_norm").get<double>();
      r.kl_opt_norm = j.at("kl_opt_norm").get<double>();
      r.total_norm = j.at("total_norm").get<double>();
      r.post_clip_norm = j.at("post_clip_norm").get<double>();
      r.data_energy = j.at("data_energy").get<double>();
      r.sample_energy = j.at("sample_energy").get<double>();
      r.mode_coverage = opt("mode_coverage");
      r.mixing_rate = opt("mixing_rate");
      r.oracle_cosine = opt("oracle_cosine");
      r.wall_time = j.at("wall_time").get<double>();
      out.push_back(r);
    }
  }
  return out;
}

bool metrics_equal_ignoring_time(const std::vector<MetricsRecord>& a,
                                 const std::vector<MetricsRecord>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.step != y.step || x.positive_norm != y.positive_norm ||
        x.negative_norm != y.negative_norm || x.kl_entropy_norm != y.kl_entropy_norm ||
        x.kl_opt_norm != y.kl_opt_norm || x.total_norm != y.total_norm ||
        x.post_clip_norm != y.post_clip_norm || x.data_energy != y.data_energy ||
        x.sample_energy != y.sample_energy || x.mode_coverage != y.mode_coverage ||
        x.mixing_rate != y.mixing_rate || x.oracle_cosine != y.oracle_cosine)
      return false;
  }
  return true;
}

double mode_coverage(const std::vector<Eigen::VectorXd>& samples,
                     const std::vector<Eigen::VectorXd>& modes, double radius) {
  if (modes.empty()) throw std::invalid_argument("mode_coverage: no modes");
  long covered = 0;
  for (const auto& m : modes) {
    for (const auto& s : samples)
      if ((s - m).norm() <= radius) {
        ++covered;
        break;
      }
  }
  return double(covered) / double(modes.size());
}

double mixing_rate(const std::vector<Eigen::VectorXd>& trajectory,
                   const std::vector<Eigen::VectorXd>& modes) {
  if (trajectory.empty()) throw std::invalid_argument("mixing_rate: empty trajectory");
  if (modes.empty()) throw std::invalid_argument("mixing_rate: no modes");
  if (trajectory.size() == 1) return 0.0;
  long changes = 0;
  long prev = nearest_mode(trajectory[0], modes);
  for (size_t s = 1; s < trajectory.size(); ++s) {
    long cur = nearest_mode(trajectory[s], modes);
    if (cur != prev) ++changes;
    prev = cur;
  }
  return 1000.0 * double(changes) / double(trajectory.size() - 1);
}

SpuriousMinimaReport spurious_minima_probe(const EnergyModel& model,
                                           const std::vector<Eigen::VectorXd>& noise_inits,
                                           const std::vector<Eigen::VectorXd>& data_inits,
                                           const SamplerConfig& sampler, double delta,
                                           std::mt19937_64& rng) {
  if (noise_inits.empty() || data_inits.empty())
    throw std::invalid_argument("spurious_minima_probe: empty init set");
  std::vector<double> data_energies;
  for (const auto& x : data_inits) data_energies.push_back(model.value(x));
  SpuriousMinimaReport rep;
  rep.delta = delta;
  rep.data_energy_median = median(data_energies);
  auto fraction = [&](const std::vector<Eigen::VectorXd>& inits) {
    long ok = 0;
    for (const auto& x : inits) {
      auto [xf, stats] = run_chain(x, model, sampler, rng);
      (void)xf;
      if (stats.final_energy <= rep.data_energy_median + delta) ++ok;
    }
    return double(ok) / double(inits.size());
  };
  rep.noise_fraction = fraction(noise_inits);
  rep.data_fraction = fraction(data_inits);
  return rep;
}

std::unique_ptr<EnergyModel> make_energy(const ExperimentConfig& cfg, long dim) {
  auto confined = [&](std::unique_ptr<EnergyModel> m) -> std::unique_ptr<EnergyModel> {
    if (cfg.energy_confine == 0.0) return m;
    return std::make_unique<ConfinedEnergy>(std::move(m), cfg.energy_confine);
  };
  if (cfg.energy_kind == "mlp")
    return confined(std::make_unique<MlpEnergy>(dim, parse_hidden(cfg.energy_hidden),
                                                cfg.train_seed, cfg.energy_spectral_norm));
  if (cfg.energy_kind == "quadratic")
    return std::make_unique<QuadraticEnergy>(Eigen::VectorXd::Zero(dim),
                                             Eigen::MatrixXd::Identity(dim, dim));
  if (cfg.energy_kind == "grid") {
    if (dim > 2) throw std::invalid_argument("make_energy: grid energies need dim <= 2");
    std::vector<long> res(dim, cfg.energy_grid_res);
    long nodes = 1;
    for (long r : res) nodes *= r;
    return std::make_unique<GridEnergy>(Eigen::VectorXd::Constant(dim, cfg.energy_box_lo),
                                        Eigen::VectorXd::Constant(dim, cfg.energy_box_hi), res,
                                        Eigen::VectorXd::Zero(nodes));
  }
  throw std::invalid_argument("make_energy: unknown kind " + cfg.energy_kind);
}

SamplerConfig make_sampler_config(const ExperimentConfig& cfg, const Dataset& dataset) {
  SamplerConfig s;
  s.step_size = cfg.sampler_step_size;
  s.noise_std = cfg.sampler_noise_std;
  s.steps = cfg.sampler_steps;
  s.adjusted = cfg.sampler_adjusted;
  if (cfg.sampler_augment != "none") {
    AugmentationConfig aug;
    aug.period = cfg.sampler_augment_period;
    if (cfg.sampler_augment == "jitter") {
      aug.op.kind = TransitionOp::kGaussianJitter;
      aug.op.scale = cfg.sampler_augment_scale;
    } else if (cfg.sampler_augment == "mode_jump") {
      if (dataset.modes.empty())
        throw std::invalid_argument("sampler.augment=mode_jump needs a dataset with known modes");
      aug.op.kind = TransitionOp::kModeJump;
      aug.op.teleport_modes = dataset.modes;
      aug.op.teleport_jitter = cfg.sampler_augment_scale;
    } else {
      throw std::invalid_argument("unknown sampler.augment " + cfg.sampler_augment);
    }
    s.augmentation = aug;
  }
  return s;
}

InitPolicy make_init_policy(const ExperimentConfig& cfg,
                            std::shared_ptr<const std::vector<Eigen::VectorXd>> data, long dim) {
  if (cfg.init_policy == "data_cd") return InitPolicy::data_cd(std::move(data), cfg.init_reinit_prob);
  if (cfg.init_policy == "persistent")
    return InitPolicy::persistent(std::move(data), cfg.init_reinit_prob);
  if (cfg.init_policy == "noise_reservoir") {
    NoiseDist noise = cfg.init_noise == "gaussian"
                          ? NoiseDist::gaussian(dim, cfg.init_noise_sigma)
                          : NoiseDist::uniform_box(dim, cfg.init_noise_lo, cfg.init_noise_hi);
    return InitPolicy::noise_reservoir(noise, cfg.init_reinit_prob);
  }
  throw std::invalid_argument("make_init_policy: unknown policy " + cfg.init_policy);
}

ObjectiveSpec make_objective_spec(const ExperimentConfig& cfg, long dim) {
  ObjectiveSpec spec;
  if (cfg.objective_variant == "exact_nll")
    spec.variant = ObjectiveSpec::kExactNLL;
  else if (cfg.objective_variant == "mcmc_nll")
    spec.variant = ObjectiveSpec::kMCMCNLL;
  else if (cfg.objective_variant == "cd_star")
    spec.variant = ObjectiveSpec::kCDStar;
  else if (cfg.objective_variant == "cd_kl")
    spec.variant = ObjectiveSpec::kCDWithKL;
  else
    throw std::invalid_argument("make_objective_spec: unknown variant " + cfg.objective_variant);
  spec.kl_sign =
      cfg.objective_kl_sign == "flipped" ? ObjectiveSpec::kFlipped : ObjectiveSpec::kCorrect;
  spec.kl_weight = cfg.objective_kl_weight;
  spec.k_backprop = cfg.objective_k_backprop;
  spec.entropy_bank_size = cfg.objective_entropy_bank;
  spec.grid.lo = Eigen::VectorXd::Constant(dim, cfg.objective_grid_lo);
  spec.grid.hi = Eigen::VectorXd::Constant(dim, cfg.objective_grid_hi);
  spec.grid.nodes_per_dim = cfg.objective_grid_nodes;
  return spec;
}

void save_checkpoint(std::ostream& os, const Checkpoint& c) {
  os.write(kCheckpointMagic, 4);
  binio::write_u32(os, kCheckpointVersion);
  binio::write_u64(os, static_cast<std::uint64_t>(c.step));
  binio::write_vec(os, c.params);
  binio::write_u64(os, static_cast<std::uint64_t>(c.adam.t));
  binio::write_u64(os, static_cast<std::uint64_t>(c.adam.skipped));
  binio::write_vec(os, c.adam.m);
  binio::write_vec(os, c.adam.v);
  binio::write_string(os, c.rng_state);
  binio::write_string(os, c.reservoir_snapshot);
  binio::write_u32(os, static_cast<std::uint32_t>(c.bank_entries.size()));
  for (const auto& b : c.bank_entries) binio::write_vec(os, b);
  if (!os) throw std::runtime_error("save_checkpoint: write failed");
}

Checkpoint load_checkpoint(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  std::uint32_t version = binio::read_u32(is, "checkpoint");
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint c;
  c.step = static_cast<long>(binio::read_u64(is, "checkpoint"));
  c.params = binio::read_vec(is, "checkpoint");
  c.adam.t = static_cast<long>(binio::read_u64(is, "checkpoint"));
  c.adam.skipped = static_cast<long>(binio::read_u64(is, "checkpoint"));
  c.adam.m = binio::read_vec(is, "checkpoint");
  c.adam.v = binio::read_vec(is, "checkpoint");
  c.rng_state = binio::read_string(is, "checkpoint");
  c.reservoir_snapshot = binio::read_string(is, "checkpoint");
  long nbank = static_cast<long>(binio::read_u32(is, "checkpoint"));
  for (long i = 0; i < nbank; ++i) c.bank_entries.push_back(binio::read_vec(is, "checkpoint"));
  return c;
}

TrainResult train(const ExperimentConfig& cfg, const std::string& resume_checkpoint) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  std::mt19937_64 rng(cfg.train_seed);
  TrainResult result;
  result.dataset = make_dataset(cfg, rng);
  long dim = result.dataset.dim();
  auto data_ptr = std::make_shared<const std::vector<Eigen::VectorXd>>(result.dataset.points);

  std::shared_ptr<EnergyModel> model(make_energy(cfg, dim));
  result.model = model;
  SamplerConfig sampler = make_sampler_config(cfg, result.dataset);
  ObjectiveSpec spec = make_objective_spec(cfg, dim);
  AdamHyper hyper = AdamHyper::from_config(cfg);
  InitPolicy policy = make_init_policy(cfg, data_ptr, dim);
  bool mcmc = spec.variant != ObjectiveSpec::kExactNLL;
  std::shared_ptr<Reservoir> reservoir;
  if (mcmc) reservoir = std::make_shared<Reservoir>(policy, cfg.init_capacity, rng);
  result.reservoir = reservoir;
  SampleBank bank(spec.entropy_bank_size);
  AdamState adam;
  long start_step = 0;

  if (!resume_checkpoint.empty()) {
    std::ifstream is(resume_checkpoint, std::ios::binary);
    if (!is) throw std::runtime_error("train: cannot open checkpoint " + resume_checkpoint);
    Checkpoint c = load_checkpoint(is);
    model->set_flat_params(c.params);
    adam = c.adam;
    start_step = c.step;
    std::istringstream rs(c.rng_state);
    rs >> rng;
    if (mcmc) {
      std::istringstream snap(c.reservoir_snapshot);
      reservoir = std::make_shared<Reservoir>(Reservoir::load(snap, policy));
      result.reservoir = reservoir;
    }
    bank.push(c.bank_entries);
  }

  std::filesystem::path outdir;
  if (!cfg.train_output_dir.empty()) {
    outdir = cfg.train_output_dir;
    std::filesystem::create_directories(outdir);
    std::ofstream(outdir / "config.txt") << cfg.serialize();
  }

  auto make_checkpoint = [&](long step) {
    Checkpoint c;
    c.step = step;
    c.params = model->flat_params();
    c.adam = adam;
    std::ostringstream rs;
    rs << rng;
    c.rng_state = rs.str();
    if (mcmc) {
      std::ostringstream snap;
      reservoir->save(snap);
      c.reservoir_snapshot = snap.str();
    }
    c.bank_entries.assign(bank.entries().begin(), bank.entries().end());
    return c;
  };

  std::ofstream audit;
  if (!outdir.empty() && cfg.train_audit_every > 0)
    audit.open(outdir / "grad_audit.jsonl", start_step > 0 ? std::ios::app : std::ios::out);

  std::uniform_int_distribution<size_t> pick(0, result.dataset.points.size() - 1);
  for (long step = start_step; step < cfg.train_steps; ++step) {
    std::vector<Eigen::VectorXd> batch;
    for (long b = 0; b < cfg.train_batch; ++b) batch.push_back(result.dataset.points[pick(rng)]);

    GradientEstimate est =
        compute_gradient(spec, *model, batch, reservoir.get(), sampler, rng, &bank);

    Eigen::VectorXd params = model->flat_params();
    double post_clip = 0.0;
    adam_step(params, est.total, adam, hyper, &post_clip);
    model->set_flat_params(params);
    EnergyModel* projectable = model.get();
    if (auto* conf = dynamic_cast<ConfinedEnergy*>(projectable)) projectable = &conf->inner();
    if (auto* mlp = dynamic_cast<MlpEnergy*>(projectable); mlp && mlp->spectral_norm_enabled())
      mlp->spectral_project();

    MetricsRecord rec;
    rec.step = step;
    rec.positive_norm = est.positive.norm();
    rec.negative_norm = est.negative_or_divergence.norm();
    rec.kl_entropy_norm = est.kl_entropy.norm();
    rec.kl_opt_norm = est.kl_opt.norm();
    rec.total_norm = est.total.norm();
    rec.post_clip_norm = post_clip;
    double de = 0.0;
    for (const auto& x : batch) de += model->value(x);
    rec.data_energy = de / double(batch.size());
    if (!est.samples.empty()) {
      double se = 0.0;
      for (const auto& x : est.samples) se += model->value(x);
      rec.sample_energy = se / double(est.samples.size());
      if (!result.dataset.modes.empty())
        rec.mode_coverage =
            mode_coverage(est.samples, result.dataset.modes, 3.0 * cfg.dataset_sigma);
    }
    if (cfg.train_audit_every > 0 && step % cfg.train_audit_every == 0 && dim <= 2 &&
        spec.variant != ObjectiveSpec::kExactNLL) {
      try {
        QuadratureGrid grid;
        grid.lo = Eigen::VectorXd::Constant(dim, cfg.objective_grid_lo);
        grid.hi = Eigen::VectorXd::Constant(dim, cfg.objective_grid_hi);
        grid.nodes_per_dim = cfg.objective_grid_nodes;
        Eigen::VectorXd exact = exact_nll_grad(*model, batch, grid);
        double denom = exact.norm() * est.total.norm();
        if (denom > 0.0) rec.oracle_cosine = exact.dot(est.total) / denom;
      } catch (const std::runtime_error&) {
        // quadrature box too small for the current model; leave unset
      }
      if (audit.is_open())
        write_grad_audit_record(audit, step, objective_variant_name(spec), est, rec.oracle_cosine);
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.metrics.push_back(rec);

    if (cfg.train_checkpoint_every > 0 && !outdir.empty() &&
        (step + 1) % cfg.train_checkpoint_every == 0) {
      std::ofstream os(outdir / "checkpoint.bin", std::ios::binary);
      save_checkpoint(os, make_checkpoint(step + 1));
    }
  }

  if (!outdir.empty()) {
    if (!result.metrics.empty()) {
      std::ofstream csv(outdir / "metrics.csv");
      emit_metrics(result.metrics, MetricsFormat::kCsv, csv);
      std::ofstream jsonl(outdir / "metrics.jsonl");
      emit_metrics(result.metrics, MetricsFormat::kJsonl, jsonl);
    }
    std::ofstream os(outdir / "checkpoint_final.bin", std::ios::binary);
    save_checkpoint(os, make_checkpoint(cfg.train_steps));
  }
  return result;
}

}  // namespace ebmforge

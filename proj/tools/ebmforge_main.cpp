// Command-line front end: train, sample, probe, grad-audit, entropy-check,
// dump-grid, buffer save/load. Every config field is overridable with
// --section.key=value; unknown keys are errors.

#include <CLI11.hpp>

#include <ebmforge/binio.hpp>
#include <ebmforge/lab.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace ebmforge;

namespace {

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    cfg = ExperimentConfig::parse_string(ss.str());
  }
  cfg.apply_overrides(overrides);
  cfg.validate();
  return cfg;
}

// Leftover CLI11 extras are interpreted as --key=value config overrides.
std::vector<std::string> extras_as_overrides(const CLI::App& app) {
  std::vector<std::string> out = app.remaining();
  std::reverse(out.begin(), out.end());  // CLI11 stores remaining() reversed
  return out;
}

struct Loaded {
  ExperimentConfig cfg;
  Dataset dataset;
  std::shared_ptr<EnergyModel> model;
  std::mt19937_64 rng;
};

Loaded build_world(const std::string& config_path, const std::vector<std::string>& overrides,
                   const std::string& checkpoint_path) {
  Loaded w{load_config(config_path, overrides), {}, nullptr, std::mt19937_64(0)};
  w.rng.seed(w.cfg.train_seed);
  w.dataset = make_dataset(w.cfg, w.rng);
  w.model = make_energy(w.cfg, w.dataset.dim());
  if (!checkpoint_path.empty()) {
    std::ifstream is(checkpoint_path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + checkpoint_path);
    Checkpoint c = load_checkpoint(is);
    w.model->set_flat_params(c.params);
  }
  return w;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& resume) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  TrainResult r = train(cfg, resume);
  const MetricsRecord& last = r.metrics.empty() ? MetricsRecord{} : r.metrics.back();
  std::printf("trained %zu steps, final |grad| = %.6g, data energy = %.6g\n", r.metrics.size(),
              last.total_norm, last.data_energy);
  if (!cfg.train_output_dir.empty())
    std::printf("artifacts in %s\n", cfg.train_output_dir.c_str());
  return 0;
}

int cmd_sample(const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& checkpoint, long chains, const std::string& out,
               const std::string& trace) {
  Loaded w = build_world(config_path, overrides, checkpoint);
  SamplerConfig sampler = make_sampler_config(w.cfg, w.dataset);
  sampler.record_trajectory = !trace.empty();
  auto data = std::make_shared<const std::vector<Eigen::VectorXd>>(w.dataset.points);
  Reservoir reservoir(make_init_policy(w.cfg, data, w.dataset.dim()),
                      std::min<long>(w.cfg.init_capacity, chains), w.rng);
  std::vector<Eigen::VectorXd> inits = reservoir.sample_inits(chains, w.rng);

  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  bool first = true;
  for (const auto& init : inits) {
    auto [final_state, stats] = run_chain(init, *w.model, sampler, w.rng);
    for (long i = 0; i < final_state.size(); ++i) os << (i ? "," : "") << final_state[i];
    os << "," << stats.final_energy << "\n";
    if (first && !trace.empty()) {
      std::ofstream ts(trace);
      write_trajectory_csv(stats.trajectory, w.model.get(), ts);
      first = false;
    }
  }
  std::printf("wrote %ld chain finals to %s\n", chains, out.c_str());
  return 0;
}

int cmd_probe(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& checkpoint, long n_inits, double delta) {
  Loaded w = build_world(config_path, overrides, checkpoint);
  SamplerConfig sampler = make_sampler_config(w.cfg, w.dataset);
  std::vector<Eigen::VectorXd> noise_inits, data_inits;
  NoiseDist noise = NoiseDist::uniform_box(w.dataset.dim(), w.cfg.init_noise_lo,
                                           w.cfg.init_noise_hi);
  std::uniform_int_distribution<size_t> pick(0, w.dataset.points.size() - 1);
  for (long i = 0; i < n_inits; ++i) {
    noise_inits.push_back(noise.draw(w.rng));
    data_inits.push_back(w.dataset.points[pick(w.rng)]);
  }
  SpuriousMinimaReport rep =
      spurious_minima_probe(*w.model, noise_inits, data_inits, sampler, delta, w.rng);
  std::printf("noise-init success fraction: %.3f\n", rep.noise_fraction);
  std::printf("data-init success fraction:  %.3f\n", rep.data_fraction);
  std::printf("data energy median: %.6g  (delta %.3g)\n", rep.data_energy_median, rep.delta);

  if (w.model->param_count() == 2) {
    // Path-dependence diagnostic for two-parameter models: circulation of
    // the update field around the current parameter point.
    ExperimentConfig cfg = w.cfg;
    auto field = [&](const Eigen::Vector2d& theta) {
      w.model->set_flat_params(theta);
      std::mt19937_64 local(cfg.train_seed);
      Dataset d = make_dataset(cfg, local);
      auto dd = std::make_shared<const std::vector<Eigen::VectorXd>>(d.points);
      Reservoir res(make_init_policy(cfg, dd, d.dim()), 64, local);
      SampleBank bank(cfg.objective_entropy_bank);
      ObjectiveSpec spec = make_objective_spec(cfg, d.dim());
      std::vector<Eigen::VectorXd> batch(d.points.begin(),
                                         d.points.begin() + std::min<size_t>(32, d.points.size()));
      GradientEstimate est =
          compute_gradient(spec, *w.model, batch, &res, make_sampler_config(cfg, d), local, &bank);
      return Eigen::Vector2d(est.total.head<2>());
    };
    Eigen::Vector2d center(w.model->flat_params().head<2>());
    double circ = gradient_field_circulation(field, center, 0.1, 4);
    std::printf("update-field circulation (half-width 0.1): %.6g\n", circ);
  }
  return 0;
}

int cmd_grad_audit(const std::string& config_path, const std::vector<std::string>& overrides,
                   long steps, long every) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  cfg.train_steps = steps;
  cfg.train_audit_every = every;
  if (cfg.train_output_dir.empty()) cfg.train_output_dir = "grad_audit_out";
  TrainResult r = train(cfg);
  long with_cosine = 0;
  for (const auto& m : r.metrics)
    if (m.oracle_cosine) ++with_cosine;
  std::printf("audited %zu steps, %ld with an oracle cosine; see %s/grad_audit.jsonl\n",
              r.metrics.size(), with_cosine, cfg.train_output_dir.c_str());
  return 0;
}

int cmd_entropy_check(long n, long dim, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed ? seed : default_seed_from_env());
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<Eigen::VectorXd> samples;
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (long j = 0; j < dim; ++j) x[j] = nd(rng);
    samples.push_back(x);
  }
  double raw = knn_entropy(samples);
  double bias = knn_entropy_bias(n, dim, rng);
  double analytic = 0.5 * dim * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
  std::printf("raw estimate:        %.6f\n", raw);
  std::printf("calibration offset:  %.6f\n", bias);
  // raw uses log NN, not dim * log NN, so the calibrated entropy carries
  // a factor of dim relative to the uniform reference.
  std::printf("calibrated estimate: %.6f\n", double(dim) * (raw - bias));
  std::printf("analytic gaussian:   %.6f\n", analytic);
  return 0;
}

int cmd_dump_grid(const std::string& config_path, const std::vector<std::string>& overrides,
                  const std::string& checkpoint, double lo, double hi, long res,
                  const std::string& out) {
  Loaded w = build_world(config_path, overrides, checkpoint);
  if (w.model->dim() != 2) throw std::runtime_error("dump-grid requires a 2-D model");
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  write_energy_grid_csv(*w.model, Eigen::Vector2d(lo, lo), Eigen::Vector2d(hi, hi), res, os);
  std::printf("wrote %ldx%ld energy grid to %s\n", res, res, out.c_str());
  return 0;
}

int cmd_buffer_save(const std::string& config_path, const std::vector<std::string>& overrides,
                    const std::string& out) {
  Loaded w = build_world(config_path, overrides, "");
  auto data = std::make_shared<const std::vector<Eigen::VectorXd>>(w.dataset.points);
  Reservoir reservoir(make_init_policy(w.cfg, data, w.dataset.dim()), w.cfg.init_capacity, w.rng);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  reservoir.save(os);
  std::printf("saved reservoir (%ld x %ld) to %s\n", reservoir.capacity(), reservoir.dim(),
              out.c_str());
  return 0;
}

int cmd_buffer_load(const std::string& path) {
  long snapshot_dim = 1;
  {
    // Peek at the header so the inspection policy matches the stored dim.
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    is.read(magic, 4);
    binio::read_u32(is, "reservoir snapshot");  // version
    binio::read_u32(is, "reservoir snapshot");  // capacity
    snapshot_dim = static_cast<long>(binio::read_u32(is, "reservoir snapshot"));
  }
  std::ifstream is(path, std::ios::binary);
  InitPolicy scratch = InitPolicy::noise_reservoir(NoiseDist::uniform_box(snapshot_dim), 0.0);
  Reservoir r = Reservoir::load(is, scratch);
  double mean_norm = 0;
  for (const auto& s : r.storage()) mean_norm += s.norm();
  mean_norm /= double(r.size());
  std::printf("reservoir: capacity %ld, dim %ld, mean state norm %.6g\n", r.capacity(), r.dim(),
              mean_norm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MCMC training laboratory for energy-based models"};
  app.require_subcommand(1);

  std::string config_path, checkpoint, resume, out, trace;
  long chains = 64, n_inits = 100, steps = 100, every = 10;
  long n = 10000, dim = 1, res = 128;
  double delta = 1.0, sigma = 1.0, lo = -6.0, hi = 6.0;
  std::uint64_t seed = 0;

  auto* t = app.add_subcommand("train", "run the training loop");
  t->add_option("--config", config_path, "config file");
  t->add_option("--resume", resume, "checkpoint to resume from");
  t->allow_extras();

  auto* s = app.add_subcommand("sample", "run chains from the configured init policy");
  s->add_option("--config", config_path, "config file");
  s->add_option("--checkpoint", checkpoint, "load model parameters from a checkpoint");
  s->add_option("--chains", chains, "number of chains");
  s->add_option("--out", out, "output CSV of chain finals")->required();
  s->add_option("--trace", trace, "trajectory CSV for the first chain");
  s->allow_extras();

  auto* p = app.add_subcommand("probe", "spurious-minima probe of the current model");
  p->add_option("--config", config_path, "config file");
  p->add_option("--checkpoint", checkpoint, "load model parameters from a checkpoint");
  p->add_option("--inits", n_inits, "init count per side");
  p->add_option("--delta", delta, "energy margin over the data median");
  p->allow_extras();

  auto* g = app.add_subcommand("grad-audit", "short run recording per-phase norms and, for "
                                             "low-dimensional models, cosine vs the quadrature "
                                             "oracle");
  g->add_option("--config", config_path, "config file");
  g->add_option("--steps", steps, "training steps to audit");
  g->add_option("--every", every, "audit cadence");
  g->allow_extras();

  auto* e = app.add_subcommand("entropy-check", "nearest-neighbor entropy sanity check");
  e->add_option("--n", n, "sample count");
  e->add_option("--dim", dim, "dimension");
  e->add_option("--sigma", sigma, "gaussian scale");
  e->add_option("--seed", seed, "rng seed (default: EBMFORGE_SEED or 0)");

  auto* d = app.add_subcommand("dump-grid", "energy values of a 2-D model on a regular grid");
  d->add_option("--config", config_path, "config file");
  d->add_option("--checkpoint", checkpoint, "load model parameters from a checkpoint");
  d->add_option("--lo", lo, "box lower corner (both axes)");
  d->add_option("--hi", hi, "box upper corner (both axes)");
  d->add_option("--res", res, "grid resolution per axis");
  d->add_option("--out", out, "output CSV")->required();
  d->allow_extras();

  auto* b = app.add_subcommand("buffer", "reservoir snapshot utilities");
  b->require_subcommand(1);
  auto* bs = b->add_subcommand("save", "build a reservoir from the config and snapshot it");
  bs->add_option("--config", config_path, "config file");
  bs->add_option("--out", out, "snapshot file")->required();
  bs->allow_extras();
  auto* bl = b->add_subcommand("load", "inspect a reservoir snapshot");
  bl->add_option("--path", out, "snapshot file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) return cmd_train(config_path, extras_as_overrides(*t), resume);
    if (s->parsed())
      return cmd_sample(config_path, extras_as_overrides(*s), checkpoint, chains, out, trace);
    if (p->parsed())
      return cmd_probe(config_path, extras_as_overrides(*p), checkpoint, n_inits, delta);
    if (g->parsed()) return cmd_grad_audit(config_path, extras_as_overrides(*g), steps, every);
    if (e->parsed()) return cmd_entropy_check(n, dim, sigma, seed);
    if (d->parsed())
      return cmd_dump_grid(config_path, extras_as_overrides(*d), checkpoint, lo, hi, res, out);
    if (b->parsed()) {
      if (bs->parsed()) return cmd_buffer_save(config_path, extras_as_overrides(*bs), out);
      if (bl->parsed()) return cmd_buffer_load(out);
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}

// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. Registered individually in ctest so every criterion is
// its own test entry.

#include <doctest.h>

#include <ebmforge/fd.hpp>
#include <ebmforge/lab.hpp>

#include "support/op_cases.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

using namespace ebmforge;

namespace {

void report(int idx, const char* what, bool ok) {
  std::printf("criterion %d (%s): %s\n", idx, what, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
}

Eigen::VectorXd randn(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double sample_variance(const std::vector<double>& xs) {
  double m = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double acc = 0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / (double(xs.size()) - 1.0);
}

}  // namespace

TEST_CASE("criterion 1: operator derivatives match finite differences") {
  std::mt19937_64 rng(2024);
  double worst1 = 0, worst2 = 0;
  for (const auto& c : ebmforge::testing::registered_op_cases()) {
    CAPTURE(c.name);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd pt = randn(c.input_dim, rng);
      worst1 = std::max(worst1, ebmforge::testing::first_order_error(c, pt));
      Eigen::VectorXd dir = randn(c.input_dim, rng).normalized();
      worst2 = std::max(worst2, ebmforge::testing::second_order_error(c, pt, dir));
    }
  }
  bool ok = worst1 < 1e-5 && worst2 < 1e-4;
  report(1, "operator derivatives vs finite differences", ok);
  CHECK(worst1 < 1e-5);
  CHECK(worst2 < 1e-4);
}

TEST_CASE("criterion 2: sampler long-run moments") {
  QuadraticEnergy q(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));

  // adjusted chain at a coarse step: exact stationary moments
  std::mt19937_64 rng(7);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  std::vector<double> mala;
  mala.reserve(1000000);
  for (long s = 0; s < 1000000; ++s) {
    x = mala_step(x, q, 0.5, rng).first;
    mala.push_back(x[0]);
  }
  double mala_mean = std::accumulate(mala.begin(), mala.end(), 0.0) / mala.size();
  double mala_var = sample_variance(mala);

  // unadjusted chain: variance matches the discrete closed form, biased
  // away from 1
  double lambda = 0.1, sigma = std::sqrt(lambda);
  x.setZero();
  std::vector<double> ula;
  ula.reserve(350000);
  for (long s = 0; s < 400000; ++s) {
    x = langevin_step(x, q, lambda, sigma, rng);
    if (s >= 50000) ula.push_back(x[0]);
  }
  double a = 1.0 - 0.5 * lambda;
  double discrete_var = sigma * sigma / (1.0 - a * a);
  double ula_var = sample_variance(ula);

  bool ok = std::abs(mala_mean) < 0.01 && std::abs(mala_var - 1.0) < 0.02 &&
            std::abs(ula_var - discrete_var) / discrete_var < 0.05;
  report(2, "sampler long-run moments", ok);
  CHECK(std::abs(mala_mean) < 0.01);
  CHECK(mala_var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(ula_var == doctest::Approx(discrete_var).epsilon(0.05));
}

TEST_CASE("criterion 3: sampled likelihood gradient tracks the quadrature oracle") {
  // 4x4 tabulated energy, high edges so the box holds all the mass
  const long res = 4;
  Eigen::VectorXd lo = Eigen::Vector2d(-3, -3), hi = Eigen::Vector2d(3, 3);
  Eigen::VectorXd nodes(res * res);
  std::mt19937_64 init_rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (long i = 0; i < res; ++i)
    for (long j = 0; j < res; ++j) {
      bool edge = i == 0 || j == 0 || i == res - 1 || j == res - 1;
      nodes[i * res + j] = edge ? 14.0 : u(init_rng);
    }
  GridEnergy m(lo, hi, {res, res}, nodes);

  std::vector<Eigen::VectorXd> data;
  std::normal_distribution<double> nd(0.0, 0.4);
  for (int i = 0; i < 200; ++i)
    data.push_back(Eigen::Vector2d(1.0 + nd(init_rng), 0.8 + nd(init_rng)));

  ObjectiveSpec exact;
  exact.variant = ObjectiveSpec::kExactNLL;
  exact.grid = QuadratureGrid::box2d(-3.5, 3.5, 301);
  std::mt19937_64 rng(11);
  GradientEstimate ge = compute_gradient(exact, m, data, nullptr, SamplerConfig{}, rng);

  ObjectiveSpec mcmc;
  mcmc.variant = ObjectiveSpec::kMCMCNLL;
  std::mt19937_64 seed_rng(13);
  Reservoir reservoir(InitPolicy::noise_reservoir(NoiseDist::uniform_box(2, -3, 3), 0.0), 10000,
                      seed_rng);
  SamplerConfig cfg;
  cfg.adjusted = true;
  cfg.step_size = 0.3;
  cfg.steps = 60;
  std::vector<Eigen::VectorXd> big;
  for (int i = 0; i < 10000; ++i) big.push_back(data[i % data.size()]);
  GradientEstimate gm = compute_gradient(mcmc, m, big, &reservoir, cfg, rng);

  double cosine = ge.total.dot(gm.total) / (ge.total.norm() * gm.total.norm());
  double pos_rel = std::abs(gm.positive.norm() - ge.positive.norm()) / ge.positive.norm();
  double neg_rel = std::abs(gm.negative_or_divergence.norm() - ge.negative_or_divergence.norm()) /
                   ge.negative_or_divergence.norm();
  bool ok = cosine > 0.99 && pos_rel < 0.05 && neg_rel < 0.05;
  report(3, "sampled likelihood gradient vs quadrature oracle", ok);
  CHECK(cosine > 0.99);
  CHECK(pos_rel < 0.05);
  CHECK(neg_rel < 0.05);
}

TEST_CASE("criterion 4: gaussian chain divergence inequality") {
  // E = p (x - theta)^2 / 2 with the coupled-noise chain keeps q gaussian:
  // m' = a m + (1 - a) theta, v' = a^2 v + lambda, a = 1 - lambda p / 2
  const double p = 1.0, lambda = 1e-4, mu = 0.3, data_var = 1.0 / p;
  auto kl_gauss = [&](double m0, double v0, double theta) {
    double vp = 1.0 / p;
    return 0.5 * (v0 / vp + (m0 - theta) * (m0 - theta) / vp - 1.0 + std::log(vp / v0));
  };
  auto kl_after = [&](double theta, long t) {
    double a = 1.0 - lambda * p / 2.0;
    double m0 = mu, v0 = data_var;
    for (long s = 0; s < t; ++s) {
      m0 = a * m0 + (1.0 - a) * theta;
      v0 = a * a * v0 + lambda;
    }
    return kl_gauss(m0, v0, theta);
  };

  bool monotone = true;
  for (long t : {1L, 10L, 100L}) {
    if (!(kl_after(1.2, t) <= kl_after(1.2, 0) + 1e-12)) monotone = false;
  }
  // the divergence objective (front minus back) vanishes at the data mean
  double gap_at_opt = std::abs(kl_after(mu, 0) - kl_after(mu, 100));
  double gap_off_opt = kl_after(1.2, 0) - kl_after(1.2, 100);
  bool ok = monotone && gap_at_opt < 1e-10 && gap_off_opt > 1e-4;
  report(4, "gaussian chain divergence inequality", ok);
  CHECK(monotone);
  CHECK(gap_at_opt < 1e-10);
  CHECK(gap_off_opt > 1e-4);
}

TEST_CASE("criterion 5: nearest-neighbor entropy estimator") {
  // translation invariance, bit-exact on dyadic coordinates
  std::vector<Eigen::VectorXd> dyadic;
  for (int i = 0; i < 16; ++i)
    dyadic.push_back(Eigen::VectorXd::Constant(1, 0.25 * i + 0.125 * ((i * 7) % 4)));
  std::vector<Eigen::VectorXd> shifted = dyadic;
  for (auto& s : shifted) s.array() += 2.0;
  bool invariant = knn_entropy(dyadic) == knn_entropy(shifted);

  // calibrated standard normal at n = 1e4
  const long n = 10000;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  std::vector<Eigen::VectorXd> gauss;
  for (long i = 0; i < n; ++i) gauss.push_back(Eigen::VectorXd::Constant(1, nd(rng)));
  double calibrated = knn_entropy(gauss) - knn_entropy_bias(n, 1, rng);
  double analytic = 0.5 * std::log(2.0 * M_PI * std::exp(1.0));  // 1.41894
  bool calibrated_ok = std::abs(calibrated - analytic) < 0.05;

  bool ok = invariant && calibrated_ok;
  report(5, "nearest-neighbor entropy estimator", ok);
  CHECK(invariant);
  CHECK(calibrated == doctest::Approx(analytic).epsilon(0.05));
}

TEST_CASE("criterion 6: chain-coupled gradients vs frozen-noise finite differences") {
  MlpEnergy m(2, {8}, 21);
  SamplerConfig cfg;
  cfg.step_size = 0.02;
  cfg.noise_std = 0.05;
  const long t = 10, k = 3;

  SamplerConfig prefix = cfg;
  prefix.steps = t - k;
  std::mt19937_64 prng(100);
  Eigen::VectorXd entry = run_chain(Eigen::Vector2d(0.4, -0.2), m, prefix, prng).first;

  SamplerConfig tail = cfg;
  tail.steps = k;
  std::mt19937_64 trng(200);
  auto r = run_chain_differentiable(entry, m, tail, k, trng);

  std::vector<Eigen::VectorXd> bank = {Eigen::Vector2d(2.0, 2.0), Eigen::Vector2d(-2.0, 1.0)};
  Eigen::VectorXd ent_g = entropy_repel_grad({r.final_node}, bank, m);
  Eigen::VectorXd opt_g = kl_opt_grad(m, {r.final_node});

  Eigen::VectorXd theta = m.flat_params();
  auto final_at = [&](const Eigen::VectorXd& tv) {
    m.set_flat_params(tv);
    std::mt19937_64 rng(200);
    Eigen::VectorXd xf = run_chain(entry, m, tail, rng).first;
    m.set_flat_params(theta);
    return xf;
  };
  auto ent_loss = [&](const Eigen::VectorXd& tv) {
    Eigen::VectorXd xf = final_at(tv);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : bank) best = std::min(best, (xf - b).squaredNorm());
    return -std::log(std::sqrt(best + 1e-16));
  };
  auto opt_loss = [&](const Eigen::VectorXd& tv) {
    Eigen::VectorXd xf = final_at(tv);
    return -m.value(xf);  // the energy's own parameters stay frozen
  };
  double ent_err = finite_difference_check(ent_loss, theta, ent_g, 1e-4);
  double opt_err = finite_difference_check(opt_loss, theta, opt_g, 1e-4);

  // sign-flipped variant is the literal negation of the same vectors
  auto mkres = [] {
    std::mt19937_64 seed_rng(88);
    return Reservoir(InitPolicy::noise_reservoir(NoiseDist::uniform_box(2, -1, 1), 0.0), 16,
                     seed_rng);
  };
  std::vector<Eigen::VectorXd> data = {Eigen::Vector2d(0.4, -0.1), Eigen::Vector2d(0.0, 0.6)};
  ObjectiveSpec correct;
  correct.variant = ObjectiveSpec::kCDWithKL;
  correct.kl_weight = 0.5;
  correct.k_backprop = 3;
  ObjectiveSpec flipped = correct;
  flipped.kl_sign = ObjectiveSpec::kFlipped;
  SamplerConfig ccfg = cfg;
  ccfg.steps = 6;
  Reservoir r1 = mkres(), r2 = mkres();
  std::mt19937_64 g1(6), g2(6);
  auto ec = compute_gradient(correct, m, data, &r1, ccfg, g1);
  auto ef = compute_gradient(flipped, m, data, &r2, ccfg, g2);
  bool negation = ec.kl_entropy == (-ef.kl_entropy).eval() && ec.kl_opt == (-ef.kl_opt).eval() &&
                  (ec.kl_entropy + ec.kl_opt).norm() > 0.0;

  bool ok = ent_err < 1e-3 && opt_err < 1e-3 && negation;
  report(6, "chain-coupled gradients vs frozen-noise finite differences", ok);
  CHECK(ent_err < 1e-3);
  CHECK(opt_err < 1e-3);
  CHECK(negation);
}

namespace {

struct ReplicationRun {
  double noise_fraction = 0;
  double data_fraction = 0;
  double coverage = 0;
};

ExperimentConfig replication_config(const char* policy, double reinit, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.dataset_variant = "mixture2d";
  cfg.dataset_modes = 8;
  cfg.dataset_radius = 4.0;
  cfg.dataset_sigma = 0.2;
  cfg.dataset_size = 2000;
  cfg.energy_kind = "mlp";
  cfg.energy_hidden = "16,16";
  cfg.sampler_step_size = 0.01;
  cfg.sampler_noise_std = 0.005;
  cfg.sampler_steps = 40;
  cfg.init_policy = policy;
  cfg.init_reinit_prob = reinit;
  cfg.init_capacity = 2000;
  cfg.init_noise_lo = -6.0;
  cfg.init_noise_hi = 6.0;
  cfg.objective_variant = "cd_star";
  cfg.optimizer_lr = 2e-3;
  cfg.train_steps = 5000;
  cfg.train_batch = 32;
  cfg.train_seed = seed;
  return cfg;
}

ReplicationRun train_and_probe(const char* policy, double reinit, std::uint64_t seed,
                               double delta) {
  ExperimentConfig cfg = replication_config(policy, reinit, seed);
  TrainResult r = train(cfg);

  std::mt19937_64 rng(seed * 1000 + 7);
  std::vector<Eigen::VectorXd> noise_inits, data_inits;
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::uniform_int_distribution<size_t> pick(0, r.dataset.points.size() - 1);
  for (int i = 0; i < 100; ++i) {
    noise_inits.push_back(Eigen::Vector2d(u(rng), u(rng)));
    data_inits.push_back(r.dataset.points[pick(rng)]);
  }
  SamplerConfig test = make_sampler_config(cfg, r.dataset);
  test.steps = 400;
  SpuriousMinimaReport rep =
      spurious_minima_probe(*r.model, noise_inits, data_inits, test, delta, rng);

  std::vector<Eigen::VectorXd> finals;
  for (const auto& init : noise_inits)
    finals.push_back(run_chain(init, *r.model, test, rng).first);
  double coverage = mode_coverage(finals, r.dataset.modes, 3 * cfg.dataset_sigma);
  return {rep.noise_fraction, rep.data_fraction, coverage};
}

}  // namespace

TEST_CASE("criterion 7: data-seeded chains leave spurious minima that reservoir chains avoid") {
  const double delta = 0.5;
  std::vector<double> cd_noise, nr_noise, nr_cov;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ReplicationRun cd = train_and_probe("data_cd", 0.1, seed, delta);
    ReplicationRun nr = train_and_probe("noise_reservoir", 0.01, seed, delta);
    std::printf("  seed %llu: data_cd noise-frac %.2f, reservoir noise-frac %.2f, coverage %.2f\n",
                (unsigned long long)seed, cd.noise_fraction, nr.noise_fraction, nr.coverage);
    std::fflush(stdout);
    cd_noise.push_back(cd.noise_fraction);
    nr_noise.push_back(nr.noise_fraction);
    nr_cov.push_back(nr.coverage);
  }
  double cd_med = median(cd_noise), nr_med = median(nr_noise), cov_med = median(nr_cov);
  bool ok = cd_med <= 0.3 && nr_med >= 0.8 && cov_med >= 7.0 / 8.0;
  report(7, "data-seeded training leaves spurious minima, reservoir training does not", ok);
  CHECK(cd_med <= 0.3);
  CHECK(nr_med >= 0.8);
  CHECK(cov_med >= 7.0 / 8.0);
}

TEST_CASE("criterion 8: mode-jump transitions speed up mixing") {
  // shared model: short reservoir-seeded training run on the 8-mode mixture
  ExperimentConfig cfg = replication_config("noise_reservoir", 0.01, 3);
  cfg.train_steps = 1500;
  TrainResult r = train(cfg);
  const auto& modes = r.dataset.modes;

  auto rate = [&](bool with_jumps, double sigma, long period, std::uint64_t seed) {
    SamplerConfig sc;
    sc.step_size = 0.01;
    sc.noise_std = sigma;
    sc.steps = 3000;
    sc.record_trajectory = true;
    if (with_jumps) {
      TransitionOp op;
      op.kind = TransitionOp::kModeJump;
      op.teleport_modes = modes;
      op.teleport_jitter = 0.1;
      sc.augmentation = AugmentationConfig{op, period};
    }
    std::mt19937_64 rng(seed);
    auto [fin, stats] = run_chain(modes[seed % modes.size()], *r.model, sc, rng);
    return mixing_rate(stats.trajectory, modes);
  };

  // "train" regime: the training sampler's noise and a short jump period;
  // "test" regime: small-noise descent sampling with sparse jumps
  bool ok = true;
  double train_med = 0, test_med = 0;
  for (int regime = 0; regime < 2; ++regime) {
    double sigma = regime == 0 ? 0.1 : 0.005;
    long period = regime == 0 ? 20 : 100;
    std::vector<double> diffs;
    for (std::uint64_t chain = 0; chain < 20; ++chain)
      diffs.push_back(rate(true, sigma, period, 500 + chain) -
                      rate(false, sigma, period, 500 + chain));
    double med = median(diffs);
    (regime == 0 ? train_med : test_med) = med;
    if (!(med > 0.0)) ok = false;
  }
  report(8, "mode-jump transitions speed up mixing", ok);
  CHECK(train_med > 0.0);
  CHECK(test_med > 0.0);
}

TEST_CASE("criterion 9: engineering invariants") {
  // determinism + clipping on a small run
  ExperimentConfig cfg;
  cfg.dataset_variant = "mixture2d";
  cfg.dataset_modes = 4;
  cfg.dataset_sigma = 0.2;
  cfg.dataset_radius = 2.0;
  cfg.dataset_size = 200;
  cfg.energy_hidden = "8";
  cfg.sampler_steps = 5;
  cfg.init_capacity = 64;
  cfg.init_noise_lo = -3.0;
  cfg.init_noise_hi = 3.0;
  cfg.train_steps = 8;
  cfg.train_batch = 8;
  cfg.train_seed = 123;
  TrainResult a = train(cfg), b = train(cfg);
  bool deterministic = a.model->flat_params() == b.model->flat_params() &&
                       metrics_equal_ignoring_time(a.metrics, b.metrics);
  bool clipped = true;
  for (const auto& rec : a.metrics)
    if (rec.post_clip_norm > 0.1 + 1e-12) clipped = false;

  // checkpoint resume reproduces the uninterrupted run
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "ebmforge_acceptance_ckpt";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ExperimentConfig half = cfg;
  half.train_steps = 4;
  half.train_checkpoint_every = 4;
  half.train_output_dir = dir.string();
  train(half);
  ExperimentConfig rest = cfg;
  rest.train_output_dir.clear();
  TrainResult resumed = train(rest, (dir / "checkpoint.bin").string());
  bool resume_ok = resumed.model->flat_params() == a.model->flat_params();
  fs::remove_all(dir);

  // reservoir reinit statistics: binomial 3-sigma band at 1e4 draws
  std::mt19937_64 rng(9);
  auto data = std::make_shared<const std::vector<Eigen::VectorXd>>(
      std::vector<Eigen::VectorXd>(32, Eigen::Vector2d(5, 5)));
  Reservoir res(InitPolicy::data_cd(data, 0.1), 64, rng);
  const long draws = 10000;
  long fresh = 0;
  // storage holds data clones; a reinit is indistinguishable here, so count
  // via a marked buffer: overwrite storage with pushes far from data
  for (int i = 0; i < 64; ++i) res.push_finals({Eigen::Vector2d(-5, -5)});
  for (long i = 0; i < draws; ++i) {
    auto s = res.sample_inits(1, rng);
    if ((s[0] - Eigen::Vector2d(5, 5)).norm() < 1e-12) ++fresh;
  }
  double p = 0.1, sigma3 = 3.0 * std::sqrt(p * (1 - p) * draws);
  bool binomial_ok = std::abs(double(fresh) - p * draws) < sigma3;

  // IDX fixture
  fs::path idx = fs::temp_directory_path() / "ebmforge_acceptance.idx";
  {
    std::ofstream os(idx, std::ios::binary);
    unsigned char bytes[] = {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 128, 64};
    os.write(reinterpret_cast<char*>(bytes), sizeof(bytes));
  }
  Dataset d = load_idx(idx.string(), false);
  bool idx_ok = d.points.size() == 1 && d.points[0][1] == 1.0 &&
                std::abs(d.points[0][2] - 128.0 / 255.0) < 1e-12;
  fs::remove(idx);

  // config round-trip fixed point
  std::string s1 = cfg.serialize();
  bool config_ok = ExperimentConfig::parse_string(s1).serialize() == s1;

  bool ok = deterministic && clipped && resume_ok && binomial_ok && idx_ok && config_ok;
  report(9, "engineering invariants", ok);
  CHECK(deterministic);
  CHECK(clipped);
  CHECK(resume_ok);
  CHECK(binomial_ok);
  CHECK(idx_ok);
  CHECK(config_ok);
}

#include <ebmforge/config.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ebmforge {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

void check_choice(const std::string& key, const std::string& v,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string msg = "config: " + key + " must be one of {";
  for (const char* a : allowed) msg += std::string(a) + ",";
  msg.back() = '}';
  throw std::invalid_argument(msg + ", got '" + v + "'");
}

// One registry drives set/get/keys/serialize so they cannot drift apart.
struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<Field>& fields() {
  auto S = [](std::string ExperimentConfig::* f) {
    return Field{nullptr, [f](ExperimentConfig& c, const std::string& v) { c.*f = v; },
                 [f](const ExperimentConfig& c) { return c.*f; }};
  };
  auto D = [](double ExperimentConfig::* f) {
    return Field{nullptr,
                 [f](ExperimentConfig& c, const std::string& v) { c.*f = parse_double("", v); },
                 [f](const ExperimentConfig& c) { return fmt(c.*f); }};
  };
  auto L = [](long ExperimentConfig::* f) {
    return Field{nullptr,
                 [f](ExperimentConfig& c, const std::string& v) { c.*f = parse_long("", v); },
                 [f](const ExperimentConfig& c) { return std::to_string(c.*f); }};
  };
  auto B = [](bool ExperimentConfig::* f) {
    return Field{nullptr,
                 [f](ExperimentConfig& c, const std::string& v) { c.*f = parse_bool("", v); },
                 [f](const ExperimentConfig& c) { return c.*f ? "true" : "false"; }};
  };
  auto named = [](const char* k, Field f) {
    f.key = k;
    return f;
  };
  static const std::vector<Field> regs = [&] {
    std::vector<Field> r;
    using C = ExperimentConfig;
    r.push_back(named("dataset.variant", S(&C::dataset_variant)));
    r.push_back(named("dataset.modes", L(&C::dataset_modes)));
    r.push_back(named("dataset.sigma", D(&C::dataset_sigma)));
    r.push_back(named("dataset.radius", D(&C::dataset_radius)));
    r.push_back(named("dataset.size", L(&C::dataset_size)));
    r.push_back(named("dataset.path", S(&C::dataset_path)));
    r.push_back(named("dataset.downsample", B(&C::dataset_downsample)));
    r.push_back(named("energy.kind", S(&C::energy_kind)));
    r.push_back(named("energy.hidden", S(&C::energy_hidden)));
    r.push_back(named("energy.spectral_norm", B(&C::energy_spectral_norm)));
    r.push_back(named("energy.confine", D(&C::energy_confine)));
    r.push_back(named("energy.grid_res", L(&C::energy_grid_res)));
    r.push_back(named("energy.box_lo", D(&C::energy_box_lo)));
    r.push_back(named("energy.box_hi", D(&C::energy_box_hi)));
    r.push_back(named("sampler.step_size", D(&C::sampler_step_size)));
    r.push_back(named("sampler.noise_std", D(&C::sampler_noise_std)));
    r.push_back(named("sampler.steps", L(&C::sampler_steps)));
    r.push_back(named("sampler.adjusted", B(&C::sampler_adjusted)));
    r.push_back(named("sampler.augment", S(&C::sampler_augment)));
    r.push_back(named("sampler.augment_period", L(&C::sampler_augment_period)));
    r.push_back(named("sampler.augment_scale", D(&C::sampler_augment_scale)));
    r.push_back(named("init.policy", S(&C::init_policy)));
    r.push_back(named("init.reinit_prob", D(&C::init_reinit_prob)));
    r.push_back(named("init.capacity", L(&C::init_capacity)));
    r.push_back(named("init.noise", S(&C::init_noise)));
    r.push_back(named("init.noise_lo", D(&C::init_noise_lo)));
    r.push_back(named("init.noise_hi", D(&C::init_noise_hi)));
    r.push_back(named("init.noise_sigma", D(&C::init_noise_sigma)));
    r.push_back(named("objective.variant", S(&C::objective_variant)));
    r.push_back(named("objective.kl_sign", S(&C::objective_kl_sign)));
    r.push_back(named("objective.kl_weight", D(&C::objective_kl_weight)));
    r.push_back(named("objective.k_backprop", L(&C::objective_k_backprop)));
    r.push_back(named("objective.entropy_bank", L(&C::objective_entropy_bank)));
    r.push_back(named("objective.grid_lo", D(&C::objective_grid_lo)));
    r.push_back(named("objective.grid_hi", D(&C::objective_grid_hi)));
    r.push_back(named("objective.grid_nodes", L(&C::objective_grid_nodes)));
    r.push_back(named("optimizer.lr", D(&C::optimizer_lr)));
    r.push_back(named("optimizer.beta1", D(&C::optimizer_beta1)));
    r.push_back(named("optimizer.beta2", D(&C::optimizer_beta2)));
    r.push_back(named("optimizer.eps", D(&C::optimizer_eps)));
    r.push_back(named("optimizer.grad_clip", D(&C::optimizer_grad_clip)));
    r.push_back(named("train.steps", L(&C::train_steps)));
    r.push_back(named("train.batch", L(&C::train_batch)));
    r.push_back(Field{"train.seed",
                      [](ExperimentConfig& c, const std::string& v) {
                        try {
                          size_t pos;
                          c.train_seed = std::stoull(v, &pos);
                          if (pos != v.size()) throw std::invalid_argument("");
                        } catch (...) {
                          throw std::invalid_argument("config: bad seed '" + v + "'");
                        }
                      },
                      [](const ExperimentConfig& c) { return std::to_string(c.train_seed); }});
    r.push_back(named("train.output_dir", S(&C::train_output_dir)));
    r.push_back(named("train.checkpoint_every", L(&C::train_checkpoint_every)));
    r.push_back(named("train.audit_every", L(&C::train_audit_every)));
    return r;
  }();
  return regs;
}

const Field& find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  try {
    find_field(key).set(*this, value);
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    if (msg.find("config:") == std::string::npos)
      throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
    if (msg.find(key) == std::string::npos)
      throw std::invalid_argument(msg + " (key " + key + ")");
    throw;
  }
}

std::string ExperimentConfig::get(const std::string& key) const {
  return find_field(key).get(*this);
}

std::vector<std::string> ExperimentConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    std::string key = f.key;
    std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) out += "\n";
      section = sec;
    }
    out += key + " = " + f.get(*this) + "\n";
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
  ExperimentConfig cfg;
  cfg.train_seed = default_seed_from_env();
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

void ExperimentConfig::apply_overrides(const std::vector<std::string>& kvs) {
  for (const auto& raw : kvs) {
    std::string kv = raw;
    if (kv.rfind("--", 0) == 0) kv = kv.substr(2);
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: override '" + raw + "' is not key=value");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
}

void ExperimentConfig::validate() const {
  check_choice("dataset.variant", dataset_variant,
               {"mixture2d", "rings2d", "synthetic_digits", "idx_file"});
  check_choice("energy.kind", energy_kind, {"mlp", "quadratic", "grid"});
  check_choice("sampler.augment", sampler_augment, {"none", "jitter", "mode_jump"});
  check_choice("init.policy", init_policy, {"data_cd", "persistent", "noise_reservoir"});
  check_choice("init.noise", init_noise, {"uniform", "gaussian"});
  check_choice("objective.variant", objective_variant,
               {"exact_nll", "mcmc_nll", "cd_star", "cd_kl"});
  check_choice("objective.kl_sign", objective_kl_sign, {"correct", "flipped"});
  if (dataset_variant == "idx_file" && dataset_path.empty())
    throw std::invalid_argument("config: dataset.path required for idx_file");
  if (objective_kl_weight < 0) throw std::invalid_argument("config: objective.kl_weight < 0");
  if (energy_confine < 0) throw std::invalid_argument("config: energy.confine < 0");
  if (train_steps < 0 || train_batch <= 0)
    throw std::invalid_argument("config: bad train.steps / train.batch");
  if (init_capacity <= 0) throw std::invalid_argument("config: init.capacity must be positive");
  if (sampler_steps < 0 || objective_k_backprop < 0 || objective_k_backprop > sampler_steps)
    throw std::invalid_argument("config: need 0 <= objective.k_backprop <= sampler.steps");
}

std::uint64_t default_seed_from_env() {
  const char* env = std::getenv("EBMFORGE_SEED");
  if (!env || !*env) return 0;
  try {
    size_t pos;
    std::uint64_t s = std::stoull(env, &pos);
    if (env[pos] != '\0') throw std::invalid_argument("");
    return s;
  } catch (...) {
    throw std::invalid_argument(std::string("EBMFORGE_SEED is not an integer: '") + env + "'");
  }
}

}  // namespace ebmforge

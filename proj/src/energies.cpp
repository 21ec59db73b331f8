#include <ebmforge/energies.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <random>
#include <stdexcept>

namespace ebmforge {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
}

// ---------------------------------------------------------------------------
// EnergyModel default paths (graph-backed)

double EnergyModel::value(const Eigen::VectorXd& x) const {
  NodePtr xn = leaf(Tensor::from_vector(x), "x", false);
  return build(xn)->value.scalar_value();
}

void EnergyModel::value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const {
  NodePtr xn = leaf(Tensor::from_vector(x), "x", true);
  NodePtr en = build(xn);
  e = en->value.scalar_value();
  g = gradient(en, {xn})[0]->value.as_vector();
}

Eigen::VectorXd EnergyModel::grad_theta(const Eigen::VectorXd& x) const {
  if (param_count() == 0) return {};
  NodePtr xn = leaf(Tensor::from_vector(x), "x", false);
  NodePtr en = build(xn);
  std::vector<NodePtr> leaves = param_leaves();
  std::vector<NodePtr> grads = gradient(en, leaves);
  Eigen::VectorXd out(param_count());
  long off = 0;
  for (const NodePtr& gnode : grads) {
    out.segment(off, gnode->value.size()) = gnode->value.as_vector();
    off += gnode->value.size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// QuadraticEnergy

QuadraticEnergy::QuadraticEnergy(const Eigen::VectorXd& mean, Eigen::MatrixXd precision)
    : precision_(std::move(precision)) {
  if (precision_.rows() != precision_.cols() || precision_.rows() != mean.size())
    throw std::invalid_argument("QuadraticEnergy: dimension mismatch");
  if ((precision_ - precision_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("QuadraticEnergy: precision must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(precision_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("QuadraticEnergy: precision must be positive definite");
  params_.add("mean", Tensor::from_vector(mean));
}

NodePtr QuadraticEnergy::build(const NodePtr& x, bool detach_params) const {
  NodePtr d = sub(x, param_node("mean", detach_params));
  NodePtr pd = matmul(constant(Tensor::from_matrix(precision_)), d);
  return mul(constant(0.5), sum(mul(d, pd)));
}

double QuadraticEnergy::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd d = x - mean();
  return 0.5 * d.dot(precision_ * d);
}

void QuadraticEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e,
                                       Eigen::VectorXd& g) const {
  Eigen::VectorXd d = x - mean();
  g = precision_ * d;
  e = 0.5 * d.dot(g);
}

Eigen::VectorXd QuadraticEnergy::grad_theta(const Eigen::VectorXd& x) const {
  return -(precision_ * (x - mean()));
}

// ---------------------------------------------------------------------------
// MixtureEnergy

MixtureEnergy::MixtureEnergy(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("MixtureEnergy: no components");
  double wsum = 0.0;
  for (const auto& c : components_) {
    if (c.weight <= 0.0 || c.sigma <= 0.0)
      throw std::invalid_argument("MixtureEnergy: weights and sigmas must be positive");
    if (c.mean.size() != components_[0].mean.size())
      throw std::invalid_argument("MixtureEnergy: component dimension mismatch");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("MixtureEnergy: weights must sum to 1");
}

NodePtr MixtureEnergy::build(const NodePtr& x, bool) const {
  const long k = static_cast<long>(components_.size());
  const double d = static_cast<double>(dim());
  NodePtr stacked = constant(Tensor::zeros({k}));
  for (long i = 0; i < k; ++i) {
    const Component& c = components_[i];
    double log_norm = std::log(c.weight) - 0.5 * d * (kLog2Pi + 2.0 * std::log(c.sigma));
    NodePtr sq = sum(square(sub(x, constant(Tensor::from_vector(c.mean)))));
    NodePtr lk = add(constant(log_norm), mul(constant(-0.5 / (c.sigma * c.sigma)), sq));
    stacked = add(stacked, scatter(reshape(lk, {1}), {i}, {k}));
  }
  return neg(logsumexp(stacked));
}

double MixtureEnergy::value(const Eigen::VectorXd& x) const {
  double e;
  Eigen::VectorXd g;
  value_and_grad_x(x, e, g);
  return e;
}

void MixtureEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e,
                                     Eigen::VectorXd& g) const {
  const long k = static_cast<long>(components_.size());
  const double d = static_cast<double>(dim());
  Eigen::VectorXd lk(k);
  for (long i = 0; i < k; ++i) {
    const Component& c = components_[i];
    lk[i] = std::log(c.weight) - 0.5 * d * (kLog2Pi + 2.0 * std::log(c.sigma)) -
            (x - c.mean).squaredNorm() / (2.0 * c.sigma * c.sigma);
  }
  double m = lk.maxCoeff();
  Eigen::VectorXd r = (lk.array() - m).exp();
  double z = r.sum();
  e = -(m + std::log(z));
  g = Eigen::VectorXd::Zero(x.size());
  for (long i = 0; i < k; ++i) {
    const Component& c = components_[i];
    g += (r[i] / z) * (x - c.mean) / (c.sigma * c.sigma);
  }
}

std::vector<Eigen::VectorXd> MixtureEnergy::mode_centers() const {
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : components_) out.push_back(c.mean);
  return out;
}

// ---------------------------------------------------------------------------
// GridEnergy

GridEnergy::GridEnergy(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<long> resolution,
                       Eigen::VectorXd node_values)
    : lo_(std::move(lo)), hi_(std::move(hi)), res_(std::move(resolution)) {
  if (lo_.size() != hi_.size() || static_cast<size_t>(lo_.size()) != res_.size())
    throw std::invalid_argument("GridEnergy: box/resolution dimension mismatch");
  if (lo_.size() < 1 || lo_.size() > 2)
    throw std::invalid_argument("GridEnergy: only 1-D and 2-D supported");
  long n = 1;
  for (size_t a = 0; a < res_.size(); ++a) {
    if (res_[a] < 2) throw std::invalid_argument("GridEnergy: resolution must be >= 2");
    if (hi_[a] <= lo_[a]) throw std::invalid_argument("GridEnergy: empty box");
    n *= res_[a];
  }
  if (node_values.size() != n)
    throw std::invalid_argument("GridEnergy: node value count mismatch");
  params_.add("nodes", Tensor::from_vector(node_values));
}

void GridEnergy::locate(const Eigen::VectorXd& x, std::vector<long>& cell,
                        Eigen::VectorXd& t) const {
  const long d = lo_.size();
  cell.resize(d);
  t.resize(d);
  for (long a = 0; a < d; ++a) {
    double h = (hi_[a] - lo_[a]) / double(res_[a] - 1);
    double u = std::min(std::max(x[a], lo_[a]), hi_[a]);
    double s = (u - lo_[a]) / h;
    cell[a] = std::min(static_cast<long>(s), res_[a] - 2);
    t[a] = s - double(cell[a]);
  }
}

NodePtr GridEnergy::build(const NodePtr& x, bool detach_params) const {
  NodePtr nodes = param_node("nodes", detach_params);
  Eigen::VectorXd xv = x->value.as_vector();
  std::vector<long> cell;
  Eigen::VectorXd tv;
  locate(xv, cell, tv);
  const long d = lo_.size();

  // Per-axis live interpolation weight; clamped coordinates contribute a
  // constant weight (zero gradient through x there), matching the numeric
  // path's constant extension.
  std::vector<NodePtr> t(d), one_minus_t(d);
  for (long a = 0; a < d; ++a) {
    double h = (hi_[a] - lo_[a]) / double(res_[a] - 1);
    if (xv[a] < lo_[a] || xv[a] > hi_[a]) {
      t[a] = constant(Tensor::full({1}, tv[a]));
    } else {
      double cell_coord = lo_[a] + double(cell[a]) * h;
      t[a] = mul(sub(gather(x, {a}), constant(Tensor::full({1}, cell_coord))),
                 constant(1.0 / h));
    }
    one_minus_t[a] = sub(constant(Tensor::full({1}, 1.0)), t[a]);
  }

  NodePtr e = constant(Tensor::zeros({1}));
  if (d == 1) {
    e = add(mul(one_minus_t[0], gather(nodes, {cell[0]})), mul(t[0], gather(nodes, {cell[0] + 1})));
  } else {
    long stride = res_[1];
    for (int c0 = 0; c0 < 2; ++c0) {
      for (int c1 = 0; c1 < 2; ++c1) {
        NodePtr w = mul(c0 ? t[0] : one_minus_t[0], c1 ? t[1] : one_minus_t[1]);
        long idx = (cell[0] + c0) * stride + (cell[1] + c1);
        e = add(e, mul(w, gather(nodes, {idx})));
      }
    }
  }
  return reshape(e, {});
}

double GridEnergy::value(const Eigen::VectorXd& x) const {
  double e;
  Eigen::VectorXd g;
  value_and_grad_x(x, e, g);
  return e;
}

void GridEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const {
  const Eigen::VectorXd nodes = params_.node("nodes")->value.as_vector();
  std::vector<long> cell;
  Eigen::VectorXd t;
  locate(x, cell, t);
  const long d = lo_.size();
  g = Eigen::VectorXd::Zero(d);
  if (d == 1) {
    double h = (hi_[0] - lo_[0]) / double(res_[0] - 1);
    double v0 = nodes[cell[0]], v1 = nodes[cell[0] + 1];
    e = (1.0 - t[0]) * v0 + t[0] * v1;
    if (x[0] >= lo_[0] && x[0] <= hi_[0]) g[0] = (v1 - v0) / h;
    return;
  }
  long stride = res_[1];
  double h0 = (hi_[0] - lo_[0]) / double(res_[0] - 1);
  double h1 = (hi_[1] - lo_[1]) / double(res_[1] - 1);
  double v00 = nodes[cell[0] * stride + cell[1]];
  double v01 = nodes[cell[0] * stride + cell[1] + 1];
  double v10 = nodes[(cell[0] + 1) * stride + cell[1]];
  double v11 = nodes[(cell[0] + 1) * stride + cell[1] + 1];
  double t0 = t[0], t1 = t[1];
  e = (1 - t0) * (1 - t1) * v00 + (1 - t0) * t1 * v01 + t0 * (1 - t1) * v10 + t0 * t1 * v11;
  if (x[0] >= lo_[0] && x[0] <= hi_[0])
    g[0] = ((1 - t1) * (v10 - v00) + t1 * (v11 - v01)) / h0;
  if (x[1] >= lo_[1] && x[1] <= hi_[1])
    g[1] = ((1 - t0) * (v01 - v00) + t0 * (v11 - v10)) / h1;
}

Eigen::VectorXd GridEnergy::grad_theta(const Eigen::VectorXd& x) const {
  std::vector<long> cell;
  Eigen::VectorXd t;
  locate(x, cell, t);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(param_count());
  if (lo_.size() == 1) {
    g[cell[0]] = 1.0 - t[0];
    g[cell[0] + 1] = t[0];
    return g;
  }
  long stride = res_[1];
  g[cell[0] * stride + cell[1]] = (1 - t[0]) * (1 - t[1]);
  g[cell[0] * stride + cell[1] + 1] = (1 - t[0]) * t[1];
  g[(cell[0] + 1) * stride + cell[1]] = t[0] * (1 - t[1]);
  g[(cell[0] + 1) * stride + cell[1] + 1] = t[0] * t[1];
  return g;
}

// ---------------------------------------------------------------------------
// MlpEnergy

MlpEnergy::MlpEnergy(long input_dim, std::vector<long> hidden, std::uint64_t seed,
                     bool spectral_norm)
    : input_dim_(input_dim), widths_(std::move(hidden)), spectral_norm_(spectral_norm) {
  widths_.push_back(1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  long fan_in = input_dim_;
  for (size_t l = 0; l < widths_.size(); ++l) {
    long fan_out = widths_[l];
    Eigen::MatrixXd w(fan_out, fan_in);
    double scale = 1.0 / std::sqrt(double(fan_in));
    for (long i = 0; i < fan_out; ++i)
      for (long j = 0; j < fan_in; ++j) w(i, j) = scale * normal(rng);
    params_.add("W" + std::to_string(l), Tensor::from_matrix(w));
    params_.add("b" + std::to_string(l), Tensor::from_vector(Eigen::VectorXd::Zero(fan_out)));
    fan_in = fan_out;
  }
  sn_state_.resize(widths_.size());
  refresh_cache();
}

void MlpEnergy::refresh_cache() {
  w_.clear();
  b_.clear();
  for (size_t l = 0; l < widths_.size(); ++l) {
    w_.push_back(params_.node("W" + std::to_string(l))->value.as_matrix());
    b_.push_back(params_.node("b" + std::to_string(l))->value.as_vector());
  }
}

void MlpEnergy::set_flat_params(const Eigen::VectorXd& v) {
  EnergyModel::set_flat_params(v);
  refresh_cache();
}

void MlpEnergy::spectral_project(int iters) {
  for (size_t l = 0; l < widths_.size(); ++l) {
    Eigen::MatrixXd wn = spectral_normalize(w_[l], iters, sn_state_[l]);
    params_.assign("W" + std::to_string(l), Tensor::from_matrix(wn));
  }
  refresh_cache();
}

NodePtr MlpEnergy::build(const NodePtr& x, bool detach_params) const {
  NodePtr h = x;
  for (size_t l = 0; l < widths_.size(); ++l) {
    NodePtr w = param_node("W" + std::to_string(l), detach_params);
    NodePtr b = param_node("b" + std::to_string(l), detach_params);
    NodePtr pre = add(matmul(w, h), b);
    h = (l + 1 < widths_.size()) ? softplus(pre) : pre;
  }
  return reshape(h, {});
}

double MlpEnergy::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h = x;
  for (size_t l = 0; l < widths_.size(); ++l) {
    Eigen::VectorXd pre = w_[l] * h + b_[l];
    if (l + 1 < widths_.size()) {
      h = pre.unaryExpr([](double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); });
    } else {
      h = pre;
    }
  }
  return h[0];
}

void MlpEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const {
  const size_t nl = widths_.size();
  std::vector<Eigen::VectorXd> pre(nl);
  Eigen::VectorXd h = x;
  for (size_t l = 0; l < nl; ++l) {
    pre[l] = w_[l] * h + b_[l];
    if (l + 1 < nl)
      h = pre[l].unaryExpr(
          [](double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); });
    else
      h = pre[l];
  }
  e = h[0];
  Eigen::VectorXd delta = Eigen::VectorXd::Ones(1);
  for (size_t l = nl; l-- > 0;) {
    if (l + 1 < nl) {
      Eigen::VectorXd sig = pre[l].unaryExpr([](double v) {
        return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
      });
      delta = delta.cwiseProduct(sig);
    }
    delta = (w_[l].transpose() * delta).eval();
  }
  g = delta;
}

Eigen::VectorXd MlpEnergy::grad_theta(const Eigen::VectorXd& x) const {
  const size_t nl = widths_.size();
  std::vector<Eigen::VectorXd> act(nl + 1);
  std::vector<Eigen::VectorXd> pre(nl);
  act[0] = x;
  for (size_t l = 0; l < nl; ++l) {
    pre[l] = w_[l] * act[l] + b_[l];
    act[l + 1] = (l + 1 < nl)
                     ? pre[l].unaryExpr([](double v) {
                         return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v)));
                       })
                     : pre[l];
  }
  Eigen::VectorXd out(param_count());
  long off_total = 0;
  std::vector<Eigen::MatrixXd> dw(nl);
  std::vector<Eigen::VectorXd> db(nl);
  Eigen::VectorXd delta = Eigen::VectorXd::Ones(1);  // dE/dpre at output layer
  for (size_t l = nl; l-- > 0;) {
    dw[l] = delta * act[l].transpose();
    db[l] = delta;
    if (l > 0) {
      Eigen::VectorXd back = w_[l].transpose() * delta;
      Eigen::VectorXd sig = pre[l - 1].unaryExpr([](double v) {
        return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
      });
      delta = back.cwiseProduct(sig);
    }
  }
  for (size_t l = 0; l < nl; ++l) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = dw[l];
    out.segment(off_total, rm.size()) = Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
    off_total += rm.size();
    out.segment(off_total, db[l].size()) = db[l];
    off_total += db[l].size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// CompositeEnergy

CompositeEnergy::CompositeEnergy(std::vector<std::shared_ptr<EnergyModel>> models,
                                 std::vector<Transform> transforms)
    : models_(std::move(models)), transforms_(std::move(transforms)) {
  if (models_.empty() || models_.size() != transforms_.size())
    throw std::invalid_argument("CompositeEnergy: model/transform arity mismatch");
  auto input_dim = [](const Transform& t, const std::shared_ptr<EnergyModel>& m) {
    if (t.kind == Transform::kIdentity) return m->dim();
    return t.h * t.w;
  };
  dim_ = input_dim(transforms_[0], models_[0]);
  for (size_t i = 0; i < models_.size(); ++i) {
    const Transform& t = transforms_[i];
    if (input_dim(t, models_[i]) != dim_)
      throw std::invalid_argument("CompositeEnergy: inconsistent input dimensions");
    if (t.kind == Transform::kDownsample) {
      if (t.factor < 1 || t.h % t.factor || t.w % t.factor)
        throw std::invalid_argument("CompositeEnergy: raster not divisible by factor");
      if ((t.h / t.factor) * (t.w / t.factor) != models_[i]->dim())
        throw std::invalid_argument("CompositeEnergy: downsample output dim mismatch");
    }
  }
}

NodePtr CompositeEnergy::build(const NodePtr& x, bool detach_params) const {
  NodePtr e = constant(0.0);
  for (size_t i = 0; i < models_.size(); ++i) {
    const Transform& t = transforms_[i];
    NodePtr xt = x;
    if (t.kind == Transform::kDownsample) {
      xt = reshape(avg_pool2d(reshape(x, {t.h, t.w}), t.factor), {models_[i]->dim()});
    }
    e = add(e, models_[i]->build(xt, detach_params));
  }
  return e;
}

std::vector<NodePtr> CompositeEnergy::param_leaves() const {
  std::vector<NodePtr> out;
  for (const auto& m : models_) {
    auto sub = m->param_leaves();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

long CompositeEnergy::param_count() const {
  long n = 0;
  for (const auto& m : models_) n += m->param_count();
  return n;
}

Eigen::VectorXd CompositeEnergy::flat_params() const {
  Eigen::VectorXd out(param_count());
  long off = 0;
  for (const auto& m : models_) {
    out.segment(off, m->param_count()) = m->flat_params();
    off += m->param_count();
  }
  return out;
}

void CompositeEnergy::set_flat_params(const Eigen::VectorXd& v) {
  long off = 0;
  for (const auto& m : models_) {
    m->set_flat_params(v.segment(off, m->param_count()));
    off += m->param_count();
  }
}

namespace {
Eigen::VectorXd pool_numeric(const Eigen::VectorXd& x, long h, long w, long f) {
  long oh = h / f, ow = w / f;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(oh * ow);
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < w; ++j) out[(i / f) * ow + (j / f)] += x[i * w + j];
  return out / double(f * f);
}
}  // namespace

double CompositeEnergy::value(const Eigen::VectorXd& x) const {
  double e = 0.0;
  for (size_t i = 0; i < models_.size(); ++i) {
    const Transform& t = transforms_[i];
    e += models_[i]->value(t.kind == Transform::kIdentity ? x
                                                          : pool_numeric(x, t.h, t.w, t.factor));
  }
  return e;
}

void CompositeEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e,
                                       Eigen::VectorXd& g) const {
  e = 0.0;
  g = Eigen::VectorXd::Zero(dim_);
  for (size_t i = 0; i < models_.size(); ++i) {
    const Transform& t = transforms_[i];
    double ei;
    Eigen::VectorXd gi;
    if (t.kind == Transform::kIdentity) {
      models_[i]->value_and_grad_x(x, ei, gi);
      g += gi;
    } else {
      models_[i]->value_and_grad_x(pool_numeric(x, t.h, t.w, t.factor), ei, gi);
      long f = t.factor, ow = t.w / f;
      for (long r = 0; r < t.h; ++r)
        for (long c = 0; c < t.w; ++c)
          g[r * t.w + c] += gi[(r / f) * ow + (c / f)] / double(f * f);
    }
    e += ei;
  }
}

Eigen::VectorXd CompositeEnergy::grad_theta(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(param_count());
  long off = 0;
  for (size_t i = 0; i < models_.size(); ++i) {
    const Transform& t = transforms_[i];
    Eigen::VectorXd xi =
        t.kind == Transform::kIdentity ? x : pool_numeric(x, t.h, t.w, t.factor);
    Eigen::VectorXd gi = models_[i]->grad_theta(xi);
    out.segment(off, models_[i]->param_count()) = gi;
    off += models_[i]->param_count();
  }
  return out;
}

// ---------------------------------------------------------------------------

ConfinedEnergy::ConfinedEnergy(std::unique_ptr<EnergyModel> inner, double weight)
    : inner_(std::move(inner)), weight_(weight) {
  if (!inner_) throw std::invalid_argument("ConfinedEnergy: null inner model");
  if (weight_ < 0) throw std::invalid_argument("ConfinedEnergy: negative weight");
}

NodePtr ConfinedEnergy::build(const NodePtr& x, bool detach_params) const {
  NodePtr quad = mul(constant(0.5 * weight_), sum(mul(x, x)));
  return add(inner_->build(x, detach_params), quad);
}

double ConfinedEnergy::value(const Eigen::VectorXd& x) const {
  return inner_->value(x) + 0.5 * weight_ * x.squaredNorm();
}

void ConfinedEnergy::value_and_grad_x(const Eigen::VectorXd& x, double& e,
                                      Eigen::VectorXd& g) const {
  inner_->value_and_grad_x(x, e, g);
  e += 0.5 * weight_ * x.squaredNorm();
  g += weight_ * x;
}

Eigen::VectorXd ConfinedEnergy::grad_theta(const Eigen::VectorXd& x) const {
  return inner_->grad_theta(x);
}

NodePtr downsample(const NodePtr& x2d, long factor) { return avg_pool2d(x2d, factor); }

void write_energy_grid_csv(const EnergyModel& model, const Eigen::Vector2d& lo,
                           const Eigen::Vector2d& hi, long resolution, std::ostream& os) {
  os << "x,y,energy\n";
  for (long i = 0; i < resolution; ++i) {
    for (long j = 0; j < resolution; ++j) {
      Eigen::Vector2d p;
      p[0] = lo[0] + (hi[0] - lo[0]) * double(i) / double(resolution - 1);
      p[1] = lo[1] + (hi[1] - lo[1]) * double(j) / double(resolution - 1);
      os << p[0] << "," << p[1] << "," << model.value(p) << "\n";
    }
  }
}

}  // namespace ebmforge

#pragma once

#include <ebmforge/graph.hpp>
#include <ebmforge/param_set.hpp>
#include <ebmforge/spectral.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

namespace ebmforge {

// Parameterized scalar field E_theta(x). The graph build is the ground
// truth; the numeric fast paths default to it and may be overridden with
// closed forms (tests cross-check the two routes).
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  virtual long dim() const = 0;

  // Scalar energy graph over x (shape [d]). With detach_params the
  // parameter leaves are wrapped in stop_gradient, realizing E under a
  // frozen theta while the x path stays live.
  virtual NodePtr build(const NodePtr& x, bool detach_params = false) const = 0;

  virtual std::vector<NodePtr> param_leaves() const { return params_.leaves(); }
  virtual long param_count() const { return params_.total_size(); }
  virtual Eigen::VectorXd flat_params() const { return params_.flatten(); }
  virtual void set_flat_params(const Eigen::VectorXd& v) { params_.assign_flat(v); }

  virtual double value(const Eigen::VectorXd& x) const;
  virtual void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const;
  // dE/dtheta at x, flattened in param order; empty for parameter-free models.
  virtual Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const;

  const ParamSet& params() const { return params_; }
  ParamSet& params() { return params_; }

 protected:
  NodePtr param_node(const std::string& name, bool detach) const {
    NodePtr n = params_.node(name);
    return detach ? stop_gradient(n) : n;
  }

  ParamSet params_;
};

// E = 0.5 (x - mean)^T P (x - mean); the mean is the trainable parameter,
// the precision is fixed. p_theta is exactly N(mean, P^{-1}).
class QuadraticEnergy : public EnergyModel {
 public:
  QuadraticEnergy(const Eigen::VectorXd& mean, Eigen::MatrixXd precision);

  long dim() const override { return precision_.rows(); }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override;

  Eigen::VectorXd mean() const { return params_.node("mean")->value.as_vector(); }
  const Eigen::MatrixXd& precision() const { return precision_; }

 private:
  Eigen::MatrixXd precision_;
};

// E(x) = -log sum_k w_k N(x; mu_k, sigma_k^2 I). Normalized by
// construction (Z = 1); parameter-free ground-truth landscape.
class MixtureEnergy : public EnergyModel {
 public:
  struct Component {
    double weight;
    Eigen::VectorXd mean;
    double sigma;
  };

  explicit MixtureEnergy(std::vector<Component> components);

  long dim() const override { return components_[0].mean.size(); }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override { return {}; }

  const std::vector<Component>& components() const { return components_; }
  std::vector<Eigen::VectorXd> mode_centers() const;

 private:
  std::vector<Component> components_;
};

// Tabulated node energies on an axis-aligned box with bilinear (linear in
// 1-D) interpolation; the node values are the trainable parameters.
// Coordinates outside the box are clamped (constant extension).
class GridEnergy : public EnergyModel {
 public:
  GridEnergy(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<long> resolution,
             Eigen::VectorXd node_values);

  long dim() const override { return lo_.size(); }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override;

  const std::vector<long>& resolution() const { return res_; }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }

 private:
  void locate(const Eigen::VectorXd& x, std::vector<long>& cell, Eigen::VectorXd& t) const;

  Eigen::VectorXd lo_, hi_;
  std::vector<long> res_;
};

// Fully connected softplus network with a linear scalar output. Weights
// init N(0, 1/fan_in), biases zero, from the given seed. Optional
// spectral normalization projects the weight matrices in place (one power
// iteration per call, persistent vectors).
class MlpEnergy : public EnergyModel {
 public:
  MlpEnergy(long input_dim, std::vector<long> hidden, std::uint64_t seed,
            bool spectral_norm = false);

  long dim() const override { return input_dim_; }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  void set_flat_params(const Eigen::VectorXd& v) override;

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override;

  // Divide each weight matrix by its estimated top singular value.
  void spectral_project(int iters = 1);
  bool spectral_norm_enabled() const { return spectral_norm_; }

 private:
  void refresh_cache();

  long input_dim_;
  std::vector<long> widths_;  // layer output widths, last entry 1
  bool spectral_norm_;
  // numeric mirror of the parameter leaves
  std::vector<Eigen::MatrixXd> w_;
  std::vector<Eigen::VectorXd> b_;
  mutable std::vector<SpectralState> sn_state_;
};

// Sum of sub-model energies over transformed views of the input; the
// density factorizes into the product of the experts.
class CompositeEnergy : public EnergyModel {
 public:
  struct Transform {
    enum Kind { kIdentity, kDownsample } kind = kIdentity;
    long factor = 1;  // downsample
    long h = 0, w = 0;  // raster layout of the input for downsample
  };

  CompositeEnergy(std::vector<std::shared_ptr<EnergyModel>> models,
                  std::vector<Transform> transforms);

  long dim() const override { return dim_; }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  std::vector<NodePtr> param_leaves() const override;
  long param_count() const override;
  Eigen::VectorXd flat_params() const override;
  void set_flat_params(const Eigen::VectorXd& v) override;

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override;

  const std::vector<std::shared_ptr<EnergyModel>>& models() const { return models_; }

 private:
  long dim_;
  std::vector<std::shared_ptr<EnergyModel>> models_;
  std::vector<Transform> transforms_;
};

// Inner model plus a fixed isotropic confinement term (1/2) w |x|^2.
// The quadratic carries no parameters, so the far field keeps a floor of
// curvature however the trainable part evolves; chains stay bounded
// without relying on box clamping.
class ConfinedEnergy : public EnergyModel {
 public:
  ConfinedEnergy(std::unique_ptr<EnergyModel> inner, double weight);

  long dim() const override { return inner_->dim(); }
  NodePtr build(const NodePtr& x, bool detach_params = false) const override;

  std::vector<NodePtr> param_leaves() const override { return inner_->param_leaves(); }
  long param_count() const override { return inner_->param_count(); }
  Eigen::VectorXd flat_params() const override { return inner_->flat_params(); }
  void set_flat_params(const Eigen::VectorXd& v) override { inner_->set_flat_params(v); }

  double value(const Eigen::VectorXd& x) const override;
  void value_and_grad_x(const Eigen::VectorXd& x, double& e, Eigen::VectorXd& g) const override;
  Eigen::VectorXd grad_theta(const Eigen::VectorXd& x) const override;

  EnergyModel& inner() { return *inner_; }
  const EnergyModel& inner() const { return *inner_; }

 private:
  std::unique_ptr<EnergyModel> inner_;
  double weight_;
};

// Average pooling of a raster state, the multi-scale input transform.
NodePtr downsample(const NodePtr& x2d, long factor);

// CSV dump (x,y,E) of a 2-D model on a regular grid, for external plotting.
void write_energy_grid_csv(const EnergyModel& model, const Eigen::Vector2d& lo,
                           const Eigen::Vector2d& hi, long resolution, std::ostream& os);

}  // namespace ebmforge

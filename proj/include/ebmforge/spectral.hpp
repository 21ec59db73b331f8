#pragma once

#include <Eigen/Core>

namespace ebmforge {

// Persistent power-iteration state for spectral normalization of one
// weight matrix. The leading left-singular-vector estimate survives
// across calls.
struct SpectralState {
  Eigen::VectorXd u;
  bool zero_matrix_warning = false;
};

// W / sigma1_hat, where sigma1_hat is the power-iteration estimate of the
// largest singular value. A zero matrix is returned unchanged with the
// warning flag set on the state.
inline Eigen::MatrixXd spectral_normalize(const Eigen::MatrixXd& w, int iters,
                                          SpectralState& state) {
  state.zero_matrix_warning = false;
  if (w.norm() == 0.0) {
    state.zero_matrix_warning = true;
    return w;
  }
  if (state.u.size() != w.rows()) {
    // deterministic start: normalized ones
    state.u = Eigen::VectorXd::Ones(w.rows()).normalized();
  }
  Eigen::VectorXd v;
  for (int i = 0; i < iters; ++i) {
    v = w.transpose() * state.u;
    double nv = v.norm();
    if (nv == 0.0) break;
    v /= nv;
    state.u = w * v;
    double nu = state.u.norm();
    if (nu == 0.0) break;
    state.u /= nu;
  }
  v = w.transpose() * state.u;
  double sigma = v.norm();
  if (sigma == 0.0) {
    state.zero_matrix_warning = true;
    return w;
  }
  return w / sigma;
}

inline double spectral_norm_estimate(const Eigen::MatrixXd& w, int iters, SpectralState& state) {
  if (w.norm() == 0.0) return 0.0;
  if (state.u.size() != w.rows()) state.u = Eigen::VectorXd::Ones(w.rows()).normalized();
  Eigen::VectorXd v;
  for (int i = 0; i < iters; ++i) {
    v = (w.transpose() * state.u).normalized();
    state.u = (w * v).normalized();
  }
  return (w.transpose() * state.u).norm();
}

}  // namespace ebmforge

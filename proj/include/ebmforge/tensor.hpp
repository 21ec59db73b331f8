#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebmforge {

using Shape = std::vector<long>;

inline long shape_size(const Shape& s) {
  return std::accumulate(s.begin(), s.end(), 1L, std::multiplies<long>());
}

inline std::string shape_str(const Shape& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

// Dense row-major array of doubles with an explicit shape. Rank 0 is a
// scalar, rank 1 a vector, rank 2 a matrix. Construction rejects
// non-finite entries when checking is enabled (default).
class Tensor {
 public:
  Tensor() : shape_{}, v_(1) { v_[0] = 0.0; }

  Tensor(Shape shape, Eigen::ArrayXd values) : shape_(std::move(shape)), v_(std::move(values)) {
    if (shape_size(shape_) != v_.size())
      throw std::invalid_argument("Tensor: shape " + shape_str(shape_) + " does not match " +
                                  std::to_string(v_.size()) + " values");
    if (check_finite_enabled() && !v_.isFinite().all())
      throw std::invalid_argument("Tensor: non-finite value in construction, shape " +
                                  shape_str(shape_));
  }

  static Tensor scalar(double v) { return Tensor(Shape{}, Eigen::ArrayXd::Constant(1, v)); }

  static Tensor zeros(const Shape& s) { return Tensor(s, Eigen::ArrayXd::Zero(shape_size(s))); }

  static Tensor full(const Shape& s, double v) {
    return Tensor(s, Eigen::ArrayXd::Constant(shape_size(s), v));
  }

  static Tensor from_vector(const Eigen::VectorXd& v) {
    return Tensor(Shape{v.size()}, v.array());
  }

  // Row-major flattening of an Eigen (column-major) matrix.
  static Tensor from_matrix(const Eigen::MatrixXd& m) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    return Tensor(Shape{m.rows(), m.cols()},
                  Eigen::Map<const Eigen::ArrayXd>(rm.data(), rm.size()));
  }

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  long size() const { return v_.size(); }
  const Eigen::ArrayXd& array() const { return v_; }

  double operator()(long i) const { return v_[i]; }
  double scalar_value() const {
    if (rank() != 0) throw std::logic_error("Tensor: scalar_value on shape " + shape_str(shape_));
    return v_[0];
  }

  Eigen::VectorXd as_vector() const { return v_.matrix(); }

  Eigen::MatrixXd as_matrix() const {
    if (rank() != 2) throw std::logic_error("Tensor: as_matrix on shape " + shape_str(shape_));
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(v_.data(), shape_[0], shape_[1]);
  }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  // Global toggle for the finite-value guard; tests that exercise the
  // error path flip it briefly.
  static bool& check_finite_enabled() {
    static bool enabled = true;
    return enabled;
  }

 private:
  Shape shape_;
  Eigen::ArrayXd v_;
};

}  // namespace ebmforge

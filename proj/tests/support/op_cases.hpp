#pragma once

// Shared fixture: one scalar-valued graph builder per registered op, used
// by both the unit tests and the acceptance suite for finite-difference
// validation of first and second order derivatives.

#include <ebmforge/fd.hpp>
#include <ebmforge/graph.hpp>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ebmforge::testing {

struct OpCase {
  std::string name;
  long input_dim;
  // Builds a scalar graph over the given requires-grad input leaf.
  std::function<NodePtr(const NodePtr&)> build;
};

inline std::vector<OpCase> registered_op_cases() {
  std::vector<OpCase> cases;
  auto positive = [](const NodePtr& x) { return add(softplus(x), constant(0.1)); };

  cases.push_back({"add", 4, [](const NodePtr& x) {
                     return sum(add(x, mul(x, constant(2.0))));
                   }});
  cases.push_back({"add_scalar_broadcast", 4, [](const NodePtr& x) {
                     return sum(add(x, sum(x)));
                   }});
  cases.push_back({"sub", 4, [](const NodePtr& x) {
                     return sum(sub(square(x), x));
                   }});
  cases.push_back({"mul", 4, [](const NodePtr& x) {
                     return sum(mul(x, tanh(x)));
                   }});
  cases.push_back({"div", 4, [positive](const NodePtr& x) {
                     return sum(div(x, positive(x)));
                   }});
  cases.push_back({"neg", 4, [](const NodePtr& x) { return sum(neg(square(x))); }});
  cases.push_back({"matmul_vec", 6, [](const NodePtr& x) {
                     // first 4 entries as 2x2 matrix, last 2 as vector
                     NodePtr m = reshape(gather(x, {0, 1, 2, 3}), {2, 2});
                     NodePtr v = gather(x, {4, 5});
                     return sum(tanh(matmul(m, v)));
                   }});
  cases.push_back({"matmul_mat", 8, [](const NodePtr& x) {
                     NodePtr a = reshape(gather(x, {0, 1, 2, 3}), {2, 2});
                     NodePtr b = reshape(gather(x, {4, 5, 6, 7}), {2, 2});
                     return sum(square(matmul(a, b)));
                   }});
  cases.push_back({"transpose", 4, [](const NodePtr& x) {
                     NodePtr m = reshape(x, {2, 2});
                     return sum(mul(m, transpose(m)));
                   }});
  cases.push_back({"sum", 5, [](const NodePtr& x) { return square(sum(x)); }});
  cases.push_back({"mean", 5, [](const NodePtr& x) { return square(mean(x)); }});
  cases.push_back({"broadcast", 3, [](const NodePtr& x) {
                     return sum(mul(broadcast_to(mean(x), {3}), x));
                   }});
  cases.push_back({"reshape", 6, [](const NodePtr& x) {
                     return sum(square(reshape(x, {2, 3})));
                   }});
  cases.push_back({"pow", 3, [positive](const NodePtr& x) {
                     return sum(pow(positive(x), 2.5));
                   }});
  cases.push_back({"exp", 3, [](const NodePtr& x) { return sum(exp(mul(x, constant(0.5)))); }});
  cases.push_back({"log", 3, [positive](const NodePtr& x) { return sum(log(positive(x))); }});
  cases.push_back({"sqrt", 3, [positive](const NodePtr& x) { return sum(sqrt(positive(x))); }});
  cases.push_back({"square", 3, [](const NodePtr& x) { return sum(square(tanh(x))); }});
  cases.push_back({"softplus", 3, [](const NodePtr& x) { return sum(softplus(x)); }});
  cases.push_back({"sigmoid", 3, [](const NodePtr& x) { return sum(sigmoid(x)); }});
  cases.push_back({"tanh", 3, [](const NodePtr& x) { return sum(tanh(x)); }});
  cases.push_back({"logsumexp", 5, [](const NodePtr& x) { return logsumexp(mul(x, x)); }});
  cases.push_back({"l2_norm", 4, [](const NodePtr& x) {
                     return l2_norm(add(x, constant(Tensor::full({4}, 0.5))));
                   }});
  cases.push_back({"avg_pool2d", 16, [](const NodePtr& x) {
                     return sum(square(avg_pool2d(reshape(x, {4, 4}), 2)));
                   }});
  cases.push_back({"upsample2d", 4, [](const NodePtr& x) {
                     return sum(tanh(upsample2d(reshape(x, {2, 2}), 2)));
                   }});
  cases.push_back({"gather", 5, [](const NodePtr& x) {
                     return sum(square(gather(x, {0, 2, 2, 4})));
                   }});
  cases.push_back({"scatter", 3, [](const NodePtr& x) {
                     return sum(square(scatter(x, {1, 3, 1}, {5})));
                   }});
  return cases;
}

// First-order check: analytic gradient of the case's scalar vs central
// differences. Returns the max relative error.
inline double first_order_error(const OpCase& c, const Eigen::VectorXd& point) {
  NodePtr x = leaf(Tensor::from_vector(point), "x");
  NodePtr y = c.build(x);
  Eigen::VectorXd analytic = gradient(y, {x})[0]->value.as_vector();
  auto f = [&](const Eigen::VectorXd& p) {
    NodePtr xl = leaf(Tensor::from_vector(p), "x");
    return c.build(xl)->value.scalar_value();
  };
  return finite_difference_check(f, point, analytic, 1e-5);
}

// Second-order check: Hessian-vector product from gradient-of-gradient vs
// central differences of the analytic first gradient.
inline double second_order_error(const OpCase& c, const Eigen::VectorXd& point,
                                 const Eigen::VectorXd& dir) {
  NodePtr x = leaf(Tensor::from_vector(point), "x");
  NodePtr y = c.build(x);
  NodePtr g = gradient(y, {x})[0];
  NodePtr gv = sum(mul(g, constant(Tensor::from_vector(dir))));
  Eigen::VectorXd analytic_hv = gradient(gv, {x})[0]->value.as_vector();
  auto gdotv = [&](const Eigen::VectorXd& p) {
    NodePtr xl = leaf(Tensor::from_vector(p), "x");
    NodePtr yl = c.build(xl);
    return gradient(yl, {xl})[0]->value.as_vector().dot(dir);
  };
  return finite_difference_check(gdotv, point, analytic_hv, 1e-4);
}

}  // namespace ebmforge::testing

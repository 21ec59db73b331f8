#include <ebmforge/fd.hpp>
#include <ebmforge/graph.hpp>
#include <ebmforge/param_set.hpp>

#include <doctest.h>

#include <random>
#include <sstream>

#include "support/op_cases.hpp"

using namespace ebmforge;

namespace {

// Two-layer softplus MLP scalar output built on the graph.
NodePtr mlp_scalar(const NodePtr& x, const NodePtr& w1, const NodePtr& b1, const NodePtr& w2,
                   const NodePtr& b2) {
  NodePtr h = softplus(add(matmul(w1, x), b1));
  return sum(add(matmul(w2, h), b2));
}

Eigen::VectorXd randn(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST_CASE("evaluate: constant and hand arithmetic") {
  CHECK(evaluate(constant(3.0)).scalar_value() == 3.0);
  NodePtr x = constant(Tensor::from_vector(Eigen::Vector3d(1, 2, 2)));
  CHECK(evaluate(sum(mul(x, x))).scalar_value() == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("evaluate: MLP energy equals straight-line reimplementation") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXd W1(5, 3), W2(1, 5);
  Eigen::VectorXd B1(5), B2(1), xv(3);
  W1 = Eigen::MatrixXd::NullaryExpr(5, 3, [&] { return randn(1, rng)[0]; });
  W2 = Eigen::MatrixXd::NullaryExpr(1, 5, [&] { return randn(1, rng)[0]; });
  B1 = randn(5, rng);
  B2 = randn(1, rng);
  xv = randn(3, rng);

  NodePtr y = mlp_scalar(leaf(Tensor::from_vector(xv), "x"),
                         constant(Tensor::from_matrix(W1)), constant(Tensor::from_vector(B1)),
                         constant(Tensor::from_matrix(W2)), constant(Tensor::from_vector(B2)));

  // Independent straight-line pass, no graph machinery.
  Eigen::VectorXd pre = W1 * xv + B1;
  Eigen::VectorXd h(5);
  for (int i = 0; i < 5; ++i) h[i] = std::log1p(std::exp(-std::abs(pre[i]))) + std::max(pre[i], 0.0);
  double expected = (W2 * h + B2)(0);
  CHECK(y->value.scalar_value() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("evaluate: shape mismatch reports op") {
  NodePtr a = constant(Tensor::from_vector(Eigen::Vector2d(1, 2)));
  NodePtr b = constant(Tensor::from_vector(Eigen::Vector3d(1, 2, 3)));
  CHECK_THROWS_WITH_AS(add(a, b), doctest::Contains("add"), std::invalid_argument);
  CHECK_THROWS_AS(matmul(b, a), std::invalid_argument);
}

TEST_CASE("gradient: basic analytic cases") {
  NodePtr x = leaf(Tensor::scalar(3.0), "x");
  NodePtr y = mul(constant(0.5), square(x));
  CHECK(gradient(y, {x})[0]->value.scalar_value() == doctest::Approx(3.0));

  // gradient of a constant w.r.t. anything is zero
  NodePtr z = leaf(Tensor::from_vector(Eigen::Vector2d(1, 2)), "z");
  NodePtr c = sum(constant(Tensor::from_vector(Eigen::Vector2d(5, 5))));
  Eigen::VectorXd g = gradient(c, {z})[0]->value.as_vector();
  CHECK(g.norm() == 0.0);
}

TEST_CASE("gradient: non-scalar root rejected") {
  NodePtr x = leaf(Tensor::from_vector(Eigen::Vector2d(1, 2)), "x");
  CHECK_THROWS_AS(gradient(square(x), {x}), std::invalid_argument);
}

TEST_CASE("gradient of gradient: d2/dx2 x^3 at 2 is 12") {
  NodePtr x = leaf(Tensor::scalar(2.0), "x");
  NodePtr y = pow(x, 3.0);
  NodePtr g = gradient(y, {x})[0];
  NodePtr h = gradient(g, {x})[0];
  CHECK(h->value.scalar_value() == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("gradient: random 2-layer MLP vs finite differences") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd W1 = Eigen::MatrixXd::NullaryExpr(6, 4, [&] { return randn(1, rng)[0]; });
    Eigen::MatrixXd W2 = Eigen::MatrixXd::NullaryExpr(1, 6, [&] { return randn(1, rng)[0]; });
    Eigen::VectorXd B1 = randn(6, rng), B2 = randn(1, rng), xv = randn(4, rng);
    NodePtr x = leaf(Tensor::from_vector(xv), "x");
    NodePtr y = mlp_scalar(x, constant(Tensor::from_matrix(W1)), constant(Tensor::from_vector(B1)),
                           constant(Tensor::from_matrix(W2)), constant(Tensor::from_vector(B2)));
    Eigen::VectorXd analytic = gradient(y, {x})[0]->value.as_vector();
    auto f = [&](const Eigen::VectorXd& p) {
      return mlp_scalar(leaf(Tensor::from_vector(p), "x"), constant(Tensor::from_matrix(W1)),
                        constant(Tensor::from_vector(B1)), constant(Tensor::from_matrix(W2)),
                        constant(Tensor::from_vector(B2)))
          ->value.scalar_value();
    };
    CHECK(finite_difference_check(f, xv, analytic, 1e-4) < 1e-5);
  }
}

TEST_CASE("stop_gradient semantics") {
  // d/dx [sg(x) * x] at x=5 is 5, not 10
  NodePtr x = leaf(Tensor::scalar(5.0), "x");
  NodePtr y = mul(stop_gradient(x), x);
  CHECK(gradient(y, {x})[0]->value.scalar_value() == doctest::Approx(5.0));

  // gradient of sg(E(theta)) w.r.t. theta is zero
  NodePtr theta = leaf(Tensor::from_vector(Eigen::Vector2d(1, -2)), "theta");
  NodePtr e = stop_gradient(sum(square(theta)));
  CHECK(gradient(e, {theta})[0]->value.as_vector().norm() == 0.0);
}

TEST_CASE("stop_gradient: forward value invariance and detach equivalence") {
  std::mt19937_64 rng(3);
  Eigen::VectorXd xv = randn(4, rng);
  Eigen::VectorXd tv = randn(4, rng);
  NodePtr theta = leaf(Tensor::from_vector(tv), "theta");

  // L_d style: energy of detached samples, sample = theta-dependent expr
  NodePtr sample = mul(theta, constant(2.0));
  NodePtr detached_loss = sum(square(sub(stop_gradient(sample), constant(Tensor::from_vector(xv)))));
  // from-scratch detachment: bake the sample values in as a constant
  NodePtr baked = constant(sample->value);
  NodePtr manual_loss = sum(square(sub(baked, constant(Tensor::from_vector(xv)))));
  CHECK(detached_loss->value.scalar_value() ==
        doctest::Approx(manual_loss->value.scalar_value()).epsilon(1e-15));
  CHECK(gradient(detached_loss, {theta})[0]->value.as_vector().norm() == 0.0);
}

TEST_CASE("finite_difference_check: quadratic, softplus MLP, and injected bug") {
  auto quad = [](const Eigen::VectorXd& p) { return 0.5 * p.squaredNorm(); };
  Eigen::VectorXd pt(3);
  pt << 0.3, -1.2, 2.0;
  CHECK(finite_difference_check(quad, pt, pt, 1e-4) < 1e-8);

  std::mt19937_64 rng(5);
  Eigen::MatrixXd W1 = Eigen::MatrixXd::NullaryExpr(4, 3, [&] { return randn(1, rng)[0]; });
  Eigen::MatrixXd W2 = Eigen::MatrixXd::NullaryExpr(1, 4, [&] { return randn(1, rng)[0]; });
  Eigen::VectorXd B1 = randn(4, rng), B2 = randn(1, rng), xv = randn(3, rng);
  auto f = [&](const Eigen::VectorXd& p) {
    return mlp_scalar(leaf(Tensor::from_vector(p), "x"), constant(Tensor::from_matrix(W1)),
                      constant(Tensor::from_vector(B1)), constant(Tensor::from_matrix(W2)),
                      constant(Tensor::from_vector(B2)))
        ->value.scalar_value();
  };
  NodePtr x = leaf(Tensor::from_vector(xv), "x");
  NodePtr y = mlp_scalar(x, constant(Tensor::from_matrix(W1)), constant(Tensor::from_vector(B1)),
                         constant(Tensor::from_matrix(W2)), constant(Tensor::from_vector(B2)));
  Eigen::VectorXd analytic = gradient(y, {x})[0]->value.as_vector();
  CHECK(finite_difference_check(f, xv, analytic, 1e-4) < 1e-4);

  // test of the test: flip the sign of the analytic gradient
  CHECK(finite_difference_check(f, xv, Eigen::VectorXd(-analytic), 1e-4) > 1.0);
}

TEST_CASE("all registered ops: first- and second-order FD, random inputs") {
  std::mt19937_64 rng(17);
  for (const auto& c : ebmforge::testing::registered_op_cases()) {
    CAPTURE(c.name);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd pt = randn(c.input_dim, rng);
      CHECK(ebmforge::testing::first_order_error(c, pt) < 1e-5);
      Eigen::VectorXd dir = randn(c.input_dim, rng).normalized();
      CHECK(ebmforge::testing::second_order_error(c, pt, dir) < 1e-4);
    }
  }
}

TEST_CASE("determinism: identical graphs give bit-identical values") {
  auto build = [] {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> d;
    Eigen::VectorXd v(6);
    for (int i = 0; i < 6; ++i) v[i] = d(rng);
    NodePtr x = leaf(Tensor::from_vector(v), "x");
    NodePtr y = logsumexp(mul(tanh(x), softplus(x)));
    return std::pair{y->value.scalar_value(), gradient(y, {x})[0]->value.as_vector()};
  };
  auto [v1, g1] = build();
  auto [v2, g2] = build();
  CHECK(v1 == v2);
  CHECK((g1 - g2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ParamSet: unique names, flatten round-trip") {
  ParamSet ps;
  ps.add("w", Tensor::from_matrix(Eigen::Matrix2d::Identity()));
  ps.add("b", Tensor::from_vector(Eigen::Vector2d(3, 4)));
  CHECK_THROWS_AS(ps.add("w", Tensor::scalar(0.0)), std::invalid_argument);
  CHECK(ps.total_size() == 6);
  Eigen::VectorXd flat = ps.flatten();
  ps.assign_flat(flat);
  CHECK((ps.flatten() - flat).norm() == 0.0);
  Eigen::VectorXd other = flat.array() + 1.0;
  ps.assign_flat(other);
  CHECK((ps.flatten() - other).norm() == 0.0);
}

TEST_CASE("Tensor: non-finite construction rejected in checked mode") {
  CHECK_THROWS_AS(Tensor::scalar(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  Tensor::check_finite_enabled() = false;
  CHECK_NOTHROW(Tensor::scalar(std::numeric_limits<double>::infinity()));
  Tensor::check_finite_enabled() = true;
}

TEST_CASE("graph dump mentions tags and shapes") {
  NodePtr x = leaf(Tensor::from_vector(Eigen::Vector2d(1, 2)), "x");
  std::ostringstream os;
  dump_graph(sum(square(x)), os);
  CHECK(os.str().find("sum") != std::string::npos);
  CHECK(os.str().find("leaf(x)") != std::string::npos);
  CHECK(os.str().find("[2]") != std::string::npos);
}

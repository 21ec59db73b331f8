#include <ebmforge/graph.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ebmforge {

const char* op_name(OpTag tag) {
  switch (tag) {
    case OpTag::kConstant: return "constant";
    case OpTag::kLeaf: return "leaf";
    case OpTag::kAdd: return "add";
    case OpTag::kSub: return "sub";
    case OpTag::kMul: return "mul";
    case OpTag::kDiv: return "div";
    case OpTag::kNeg: return "neg";
    case OpTag::kMatMul: return "matmul";
    case OpTag::kTranspose: return "transpose";
    case OpTag::kSum: return "sum";
    case OpTag::kMean: return "mean";
    case OpTag::kBroadcast: return "broadcast";
    case OpTag::kReshape: return "reshape";
    case OpTag::kPow: return "pow";
    case OpTag::kExp: return "exp";
    case OpTag::kLog: return "log";
    case OpTag::kSqrt: return "sqrt";
    case OpTag::kSquare: return "square";
    case OpTag::kSoftplus: return "softplus";
    case OpTag::kSigmoid: return "sigmoid";
    case OpTag::kTanh: return "tanh";
    case OpTag::kLogSumExp: return "logsumexp";
    case OpTag::kAvgPool2d: return "avg_pool2d";
    case OpTag::kUpsample2d: return "upsample2d";
    case OpTag::kGather: return "gather";
    case OpTag::kScatter: return "scatter";
    case OpTag::kStopGrad: return "stop_gradient";
  }
  return "?";
}

namespace {

[[noreturn]] void shape_error(OpTag tag, const std::string& detail) {
  throw std::invalid_argument(std::string("graph op '") + op_name(tag) +
                              "': shape mismatch, " + detail);
}

bool any_requires_grad(const std::vector<NodePtr>& parents) {
  return std::any_of(parents.begin(), parents.end(),
                     [](const NodePtr& p) { return p->requires_grad; });
}

NodePtr make(OpTag tag, std::vector<NodePtr> parents, Tensor value) {
  auto n = std::make_shared<Node>();
  n->tag = tag;
  n->requires_grad = any_requires_grad(parents);
  n->parents = std::move(parents);
  n->value = std::move(value);
  return n;
}

// Elementwise binary with scalar broadcast on either side.
template <typename F>
Tensor ewise(OpTag tag, const Tensor& a, const Tensor& b, F f) {
  if (a.same_shape(b)) return Tensor(a.shape(), f(a.array(), b.array()));
  if (b.rank() == 0)
    return Tensor(a.shape(), f(a.array(), Eigen::ArrayXd::Constant(a.size(), b(0))));
  if (a.rank() == 0)
    return Tensor(b.shape(), f(Eigen::ArrayXd::Constant(b.size(), a(0)), b.array()));
  shape_error(tag, shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

void check_binary_shapes(OpTag tag, const NodePtr& a, const NodePtr& b) {
  const Tensor& ta = a->value;
  const Tensor& tb = b->value;
  if (!ta.same_shape(tb) && ta.rank() != 0 && tb.rank() != 0)
    shape_error(tag, shape_str(ta.shape()) + " vs " + shape_str(tb.shape()));
}

}  // namespace

NodePtr constant(Tensor value) { return make(OpTag::kConstant, {}, std::move(value)); }

NodePtr constant(double value) { return constant(Tensor::scalar(value)); }

NodePtr leaf(Tensor value, std::string name, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->tag = OpTag::kLeaf;
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  n->name = std::move(name);
  return n;
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
  check_binary_shapes(OpTag::kAdd, a, b);
  return make(OpTag::kAdd, {a, b},
              ewise(OpTag::kAdd, a->value, b->value,
                    [](const auto& x, const auto& y) -> Eigen::ArrayXd { return x + y; }));
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
  check_binary_shapes(OpTag::kSub, a, b);
  return make(OpTag::kSub, {a, b},
              ewise(OpTag::kSub, a->value, b->value,
                    [](const auto& x, const auto& y) -> Eigen::ArrayXd { return x - y; }));
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
  check_binary_shapes(OpTag::kMul, a, b);
  return make(OpTag::kMul, {a, b},
              ewise(OpTag::kMul, a->value, b->value,
                    [](const auto& x, const auto& y) -> Eigen::ArrayXd { return x * y; }));
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
  check_binary_shapes(OpTag::kDiv, a, b);
  return make(OpTag::kDiv, {a, b},
              ewise(OpTag::kDiv, a->value, b->value,
                    [](const auto& x, const auto& y) -> Eigen::ArrayXd { return x / y; }));
}

NodePtr neg(const NodePtr& a) {
  return make(OpTag::kNeg, {a}, Tensor(a->value.shape(), -a->value.array()));
}

NodePtr matmul(const NodePtr& a, const NodePtr& b) {
  const Tensor& ta = a->value;
  const Tensor& tb = b->value;
  if (ta.rank() != 2) shape_error(OpTag::kMatMul, "lhs must be rank 2, got " + shape_str(ta.shape()));
  Eigen::MatrixXd A = ta.as_matrix();
  if (tb.rank() == 1) {
    if (tb.shape()[0] != ta.shape()[1])
      shape_error(OpTag::kMatMul, shape_str(ta.shape()) + " x " + shape_str(tb.shape()));
    Eigen::VectorXd out = A * tb.as_vector();
    return make(OpTag::kMatMul, {a, b}, Tensor::from_vector(out));
  }
  if (tb.rank() == 2) {
    if (tb.shape()[0] != ta.shape()[1])
      shape_error(OpTag::kMatMul, shape_str(ta.shape()) + " x " + shape_str(tb.shape()));
    Eigen::MatrixXd out = A * tb.as_matrix();
    return make(OpTag::kMatMul, {a, b}, Tensor::from_matrix(out));
  }
  shape_error(OpTag::kMatMul, "rhs must be rank 1 or 2, got " + shape_str(tb.shape()));
}

NodePtr transpose(const NodePtr& a) {
  if (a->value.rank() != 2)
    shape_error(OpTag::kTranspose, "rank 2 required, got " + shape_str(a->value.shape()));
  return make(OpTag::kTranspose, {a}, Tensor::from_matrix(a->value.as_matrix().transpose()));
}

NodePtr sum(const NodePtr& a) {
  return make(OpTag::kSum, {a}, Tensor::scalar(a->value.array().sum()));
}

NodePtr mean(const NodePtr& a) {
  return make(OpTag::kMean, {a}, Tensor::scalar(a->value.array().mean()));
}

NodePtr broadcast_to(const NodePtr& a, const Shape& shape) {
  if (a->value.rank() != 0)
    shape_error(OpTag::kBroadcast, "source must be scalar, got " + shape_str(a->value.shape()));
  auto n = make(OpTag::kBroadcast, {a}, Tensor::full(shape, a->value(0)));
  const_cast<Node*>(n.get())->shape_attr = shape;
  return n;
}

NodePtr reshape(const NodePtr& a, const Shape& shape) {
  if (shape_size(shape) != a->value.size())
    shape_error(OpTag::kReshape, shape_str(a->value.shape()) + " -> " + shape_str(shape));
  auto n = make(OpTag::kReshape, {a}, Tensor(shape, a->value.array()));
  const_cast<Node*>(n.get())->shape_attr = shape;
  return n;
}

NodePtr pow(const NodePtr& a, double exponent) {
  auto n = make(OpTag::kPow, {a}, Tensor(a->value.shape(), a->value.array().pow(exponent)));
  const_cast<Node*>(n.get())->fattr = exponent;
  return n;
}

NodePtr exp(const NodePtr& a) {
  return make(OpTag::kExp, {a}, Tensor(a->value.shape(), a->value.array().exp()));
}

NodePtr log(const NodePtr& a) {
  return make(OpTag::kLog, {a}, Tensor(a->value.shape(), a->value.array().log()));
}

NodePtr sqrt(const NodePtr& a) {
  return make(OpTag::kSqrt, {a}, Tensor(a->value.shape(), a->value.array().sqrt()));
}

NodePtr square(const NodePtr& a) {
  return make(OpTag::kSquare, {a}, Tensor(a->value.shape(), a->value.array().square()));
}

NodePtr softplus(const NodePtr& a) {
  Eigen::ArrayXd x = a->value.array();
  Eigen::ArrayXd out = x.max(0.0) + (-x.abs()).exp().log1p();
  return make(OpTag::kSoftplus, {a}, Tensor(a->value.shape(), out));
}

NodePtr sigmoid(const NodePtr& a) {
  Eigen::ArrayXd x = a->value.array();
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = x[i];
    out[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  return make(OpTag::kSigmoid, {a}, Tensor(a->value.shape(), out));
}

NodePtr tanh(const NodePtr& a) {
  return make(OpTag::kTanh, {a}, Tensor(a->value.shape(), a->value.array().tanh()));
}

NodePtr logsumexp(const NodePtr& a) {
  const Eigen::ArrayXd& x = a->value.array();
  double m = x.maxCoeff();
  double out = m + std::log((x - m).exp().sum());
  return make(OpTag::kLogSumExp, {a}, Tensor::scalar(out));
}

NodePtr l2_norm(const NodePtr& a) { return sqrt(sum(square(a))); }

NodePtr avg_pool2d(const NodePtr& a, long factor) {
  const Tensor& t = a->value;
  if (t.rank() != 2) shape_error(OpTag::kAvgPool2d, "rank 2 required");
  long h = t.shape()[0], w = t.shape()[1];
  if (factor < 1 || h % factor != 0 || w % factor != 0)
    shape_error(OpTag::kAvgPool2d,
                shape_str(t.shape()) + " not divisible by factor " + std::to_string(factor));
  long oh = h / factor, ow = w / factor;
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(oh * ow);
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < w; ++j) out[(i / factor) * ow + (j / factor)] += t(i * w + j);
  out /= double(factor * factor);
  auto n = make(OpTag::kAvgPool2d, {a}, Tensor(Shape{oh, ow}, out));
  const_cast<Node*>(n.get())->iattr = factor;
  return n;
}

NodePtr upsample2d(const NodePtr& a, long factor) {
  const Tensor& t = a->value;
  if (t.rank() != 2) shape_error(OpTag::kUpsample2d, "rank 2 required");
  long h = t.shape()[0], w = t.shape()[1];
  long oh = h * factor, ow = w * factor;
  Eigen::ArrayXd out(oh * ow);
  for (long i = 0; i < oh; ++i)
    for (long j = 0; j < ow; ++j) out[i * ow + j] = t((i / factor) * w + (j / factor));
  auto n = make(OpTag::kUpsample2d, {a}, Tensor(Shape{oh, ow}, out));
  const_cast<Node*>(n.get())->iattr = factor;
  return n;
}

NodePtr gather(const NodePtr& a, std::vector<long> indices) {
  const Tensor& t = a->value;
  Eigen::ArrayXd out(static_cast<long>(indices.size()));
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= t.size())
      shape_error(OpTag::kGather, "index " + std::to_string(indices[i]) + " out of range for " +
                                      shape_str(t.shape()));
    out[static_cast<long>(i)] = t(indices[i]);
  }
  auto n = make(OpTag::kGather, {a}, Tensor(Shape{static_cast<long>(indices.size())}, out));
  const_cast<Node*>(n.get())->indices = std::move(indices);
  return n;
}

NodePtr scatter(const NodePtr& a, std::vector<long> indices, const Shape& target) {
  const Tensor& t = a->value;
  if (t.size() != static_cast<long>(indices.size()))
    shape_error(OpTag::kScatter, "source size != index count");
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(shape_size(target));
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= out.size())
      shape_error(OpTag::kScatter, "index out of range");
    out[indices[i]] += t(static_cast<long>(i));
  }
  auto n = make(OpTag::kScatter, {a}, Tensor(target, out));
  const_cast<Node*>(n.get())->indices = std::move(indices);
  const_cast<Node*>(n.get())->shape_attr = target;
  return n;
}

NodePtr stop_gradient(const NodePtr& a) {
  auto n = std::make_shared<Node>();
  n->tag = OpTag::kStopGrad;
  n->parents = {a};
  n->value = a->value;
  n->requires_grad = false;
  return n;
}

const Tensor& evaluate(const NodePtr& node) { return node->value; }

namespace {

// Sums g down to a scalar when the operand it flows to is scalar but the
// result of the broadcasted op is not.
NodePtr reduce_like(const NodePtr& g, const NodePtr& target) {
  if (target->value.rank() == 0 && g->value.rank() != 0) return sum(g);
  return g;
}

NodePtr accumulate(const NodePtr& acc, const NodePtr& g) { return acc ? add(acc, g) : g; }

std::vector<NodePtr> topo_order(const NodePtr& root) {
  std::vector<NodePtr> order;
  std::unordered_set<const Node*> seen;
  // Iterative post-order DFS, children visited in parent-list order.
  std::vector<std::pair<NodePtr, size_t>> stack;
  stack.emplace_back(root, 0);
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      NodePtr p = node->parents[next++];
      if (node->tag != OpTag::kStopGrad && p->requires_grad && !seen.count(p.get())) {
        seen.insert(p.get());
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;  // parents before children; reverse-iterate for backprop
}

void backprop_into_parents(const NodePtr& node, const NodePtr& g,
                           std::unordered_map<const Node*, NodePtr>& adj) {
  auto push = [&](const NodePtr& parent, const NodePtr& contrib) {
    if (!parent->requires_grad) return;
    adj[parent.get()] = accumulate(adj.count(parent.get()) ? adj[parent.get()] : nullptr, contrib);
  };
  const auto& p = node->parents;
  switch (node->tag) {
    case OpTag::kConstant:
    case OpTag::kLeaf:
    case OpTag::kStopGrad:
      break;
    case OpTag::kAdd:
      push(p[0], reduce_like(g, p[0]));
      push(p[1], reduce_like(g, p[1]));
      break;
    case OpTag::kSub:
      push(p[0], reduce_like(g, p[0]));
      push(p[1], reduce_like(neg(g), p[1]));
      break;
    case OpTag::kMul:
      push(p[0], reduce_like(mul(g, p[1]), p[0]));
      push(p[1], reduce_like(mul(g, p[0]), p[1]));
      break;
    case OpTag::kDiv:
      push(p[0], reduce_like(div(g, p[1]), p[0]));
      push(p[1], reduce_like(neg(div(mul(g, p[0]), square(p[1]))), p[1]));
      break;
    case OpTag::kNeg:
      push(p[0], neg(g));
      break;
    case OpTag::kMatMul: {
      const NodePtr& a = p[0];
      const NodePtr& b = p[1];
      if (b->value.rank() == 1) {
        long m = a->value.shape()[0], k = a->value.shape()[1];
        push(a, matmul(reshape(g, {m, 1}), reshape(b, {1, k})));
        push(b, matmul(transpose(a), g));
      } else {
        push(a, matmul(g, transpose(b)));
        push(b, matmul(transpose(a), g));
      }
      break;
    }
    case OpTag::kTranspose:
      push(p[0], transpose(g));
      break;
    case OpTag::kSum:
      push(p[0], broadcast_to(g, p[0]->value.shape()));
      break;
    case OpTag::kMean:
      push(p[0], mul(broadcast_to(g, p[0]->value.shape()),
                     constant(1.0 / double(p[0]->value.size()))));
      break;
    case OpTag::kBroadcast:
      push(p[0], sum(g));
      break;
    case OpTag::kReshape:
      push(p[0], reshape(g, p[0]->value.shape()));
      break;
    case OpTag::kPow:
      push(p[0], mul(g, mul(constant(node->fattr), pow(p[0], node->fattr - 1.0))));
      break;
    case OpTag::kExp:
      // NOLINTNEXTLINE: reuse of the forward node keeps the adjoint stable
      push(p[0], mul(g, exp(p[0])));
      break;
    case OpTag::kLog:
      push(p[0], div(g, p[0]));
      break;
    case OpTag::kSqrt:
      push(p[0], div(g, mul(constant(2.0), sqrt(p[0]))));
      break;
    case OpTag::kSquare:
      push(p[0], mul(g, mul(constant(2.0), p[0])));
      break;
    case OpTag::kSoftplus:
      push(p[0], mul(g, sigmoid(p[0])));
      break;
    case OpTag::kSigmoid: {
      NodePtr s = sigmoid(p[0]);
      push(p[0], mul(g, mul(s, sub(constant(1.0), s))));
      break;
    }
    case OpTag::kTanh: {
      NodePtr t = tanh(p[0]);
      push(p[0], mul(g, sub(constant(1.0), square(t))));
      break;
    }
    case OpTag::kLogSumExp: {
      NodePtr lse = logsumexp(p[0]);
      push(p[0], mul(broadcast_to(g, p[0]->value.shape()), exp(sub(p[0], lse))));
      break;
    }
    case OpTag::kAvgPool2d:
      push(p[0], mul(upsample2d(g, node->iattr),
                     constant(1.0 / double(node->iattr * node->iattr))));
      break;
    case OpTag::kUpsample2d:
      push(p[0], mul(avg_pool2d(g, node->iattr), constant(double(node->iattr * node->iattr))));
      break;
    case OpTag::kGather:
      push(p[0], scatter(g, node->indices, p[0]->value.shape()));
      break;
    case OpTag::kScatter:
      push(p[0], gather(g, node->indices));
      break;
  }
}

}  // namespace

std::vector<NodePtr> gradient(const NodePtr& scalar_root, const std::vector<NodePtr>& wrt) {
  if (scalar_root->value.rank() != 0)
    throw std::invalid_argument("gradient: root must be scalar, got shape " +
                                shape_str(scalar_root->value.shape()));
  std::unordered_map<const Node*, NodePtr> adj;
  if (scalar_root->requires_grad) {
    adj[scalar_root.get()] = constant(1.0);
    std::vector<NodePtr> order = topo_order(scalar_root);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto found = adj.find(it->get());
      if (found == adj.end()) continue;
      backprop_into_parents(*it, found->second, adj);
    }
  }
  std::vector<NodePtr> out;
  out.reserve(wrt.size());
  for (const NodePtr& w : wrt) {
    auto found = adj.find(w.get());
    out.push_back(found != adj.end() ? found->second
                                     : constant(Tensor::zeros(w->value.shape())));
  }
  return out;
}

namespace {
void dump_rec(const NodePtr& node, std::ostream& os, int depth,
              std::unordered_set<const Node*>& seen) {
  for (int i = 0; i < depth; ++i) os << "  ";
  os << op_name(node->tag);
  if (!node->name.empty()) os << "(" << node->name << ")";
  os << " " << shape_str(node->value.shape()) << (node->requires_grad ? " grad" : "");
  if (seen.count(node.get())) {
    os << " ...\n";
    return;
  }
  seen.insert(node.get());
  os << "\n";
  for (const NodePtr& p : node->parents) dump_rec(p, os, depth + 1, seen);
}
}  // namespace

void dump_graph(const NodePtr& root, std::ostream& os) {
  std::unordered_set<const Node*> seen;
  dump_rec(root, os, 0, seen);
}

}  // namespace ebmforge

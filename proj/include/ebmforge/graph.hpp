#pragma once

#include <ebmforge/tensor.hpp>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ebmforge {

// Define-by-run computation graph. Node values are computed eagerly at
// construction and are immutable afterwards; gradients are built as new
// graphs out of the same ops, so every gradient is itself differentiable.

enum class OpTag {
  kConstant,
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kMatMul,
  kTranspose,
  kSum,
  kMean,
  kBroadcast,
  kReshape,
  kPow,
  kExp,
  kLog,
  kSqrt,
  kSquare,
  kSoftplus,
  kSigmoid,
  kTanh,
  kLogSumExp,
  kAvgPool2d,
  kUpsample2d,
  kGather,
  kScatter,
  kStopGrad,
};

const char* op_name(OpTag tag);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  OpTag tag;
  std::vector<NodePtr> parents;
  Tensor value;
  bool requires_grad = false;
  std::string name;           // leaves only
  double fattr = 0.0;         // pow exponent
  long iattr = 0;             // pool/upsample factor
  std::vector<long> indices;  // gather / scatter
  Shape shape_attr;           // broadcast / reshape / scatter target
};

NodePtr constant(Tensor value);
NodePtr constant(double value);
NodePtr leaf(Tensor value, std::string name, bool requires_grad = true);

NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);
NodePtr div(const NodePtr& a, const NodePtr& b);
NodePtr neg(const NodePtr& a);

NodePtr matmul(const NodePtr& a, const NodePtr& b);
NodePtr transpose(const NodePtr& a);

NodePtr sum(const NodePtr& a);
NodePtr mean(const NodePtr& a);
NodePtr broadcast_to(const NodePtr& a, const Shape& shape);
NodePtr reshape(const NodePtr& a, const Shape& shape);

NodePtr pow(const NodePtr& a, double exponent);
NodePtr exp(const NodePtr& a);
NodePtr log(const NodePtr& a);
NodePtr sqrt(const NodePtr& a);
NodePtr square(const NodePtr& a);
NodePtr softplus(const NodePtr& a);
NodePtr sigmoid(const NodePtr& a);
NodePtr tanh(const NodePtr& a);
NodePtr logsumexp(const NodePtr& a);
NodePtr l2_norm(const NodePtr& a);

NodePtr avg_pool2d(const NodePtr& a, long factor);
NodePtr upsample2d(const NodePtr& a, long factor);

NodePtr gather(const NodePtr& a, std::vector<long> indices);
NodePtr scatter(const NodePtr& a, std::vector<long> indices, const Shape& target);

// Value passes through unchanged; no gradient flows through this node.
NodePtr stop_gradient(const NodePtr& a);

// Eager engine: the value already exists, this is the read.
const Tensor& evaluate(const NodePtr& node);

// Reverse-mode differentiation of a scalar root with respect to any set
// of nodes in its graph. Results are graphs and can be differentiated
// again. Nodes unreachable from the root (or with requires_grad off)
// yield zero tensors of matching shape.
std::vector<NodePtr> gradient(const NodePtr& scalar_root, const std::vector<NodePtr>& wrt);

// Text outline of a graph for troubleshooting: tag, shape, requires-grad.
void dump_graph(const NodePtr& root, std::ostream& os);

}  // namespace ebmforge

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adventurer/tensor.hpp"

namespace adv {

using NodeId = std::uint32_t;

// Reverse-mode tape. Nodes are appended in evaluation order, so walking the
// tape backwards is a valid topological order; backward() consumes the tape
// (a second call throws). Parameter leaves accumulate into the bound
// ParamSet grad buffers additively; callers zero grads between steps.
class Tape {
 public:
  // Leaves.
  NodeId constant(Tensor t);
  NodeId param(ParamSet& ps, const std::string& name);

  // y = x * W^T + b, x:[B,I] W:[O,I] b:[O] -> [B,O].
  NodeId affine(NodeId x, NodeId w, NodeId b);

  // Elementwise, shape preserved.
  NodeId tanh_(NodeId x);
  NodeId relu(NodeId x);
  NodeId leaky_relu(NodeId x, double slope);
  NodeId sigmoid(NodeId x);
  NodeId softplus(NodeId x);
  NodeId exp_(NodeId x);
  NodeId log_(NodeId x);
  NodeId square(NodeId x);
  NodeId abs_(NodeId x);
  NodeId scale(NodeId x, double c);
  NodeId add_scalar(NodeId x, double c);
  NodeId clamp(NodeId x, double lo, double hi);

  // Elementwise binary, shapes must match.
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId div(NodeId a, NodeId b);
  NodeId minimum(NodeId a, NodeId b);  // ties route gradient to a

  // s is a scalar node, broadcast over x.
  NodeId add_scalar_node(NodeId x, NodeId s);

  // Row-structured ops on [B,N].
  NodeId log_softmax(NodeId x);
  NodeId select_rows(NodeId x, const std::vector<std::size_t>& idx);  // -> [B]
  NodeId sum_rows(NodeId x);                                          // -> [B]
  NodeId broadcast_row(NodeId v, std::size_t batch);  // [N] -> [B,N]
  NodeId concat_cols(NodeId a, NodeId b);             // [B,M]+[B,N] -> [B,M+N]

  // Reductions to scalar.
  NodeId sum(NodeId x);
  NodeId mean(NodeId x);
  NodeId mean_abs(NodeId x);
  NodeId mean_sq(NodeId x);

  const Tensor& val(NodeId id) const { return nodes_[id].val; }
  const std::vector<double>& grad(NodeId id) const { return nodes_[id].grad; }
  double scalar(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }

  void backward(NodeId out);

 private:
  enum class Op : std::uint8_t {
    kConst, kParam, kAffine, kTanh, kRelu, kLeakyRelu, kSigmoid, kSoftplus,
    kExp, kLog, kSquare, kAbs, kScale, kAddScalar, kClamp, kAdd, kSub, kMul,
    kDiv, kMin, kAddScalarNode, kLogSoftmax, kSelectRows, kSumRows,
    kBroadcastRow, kConcatCols, kSum, kMean, kMeanAbs, kMeanSq,
  };

  struct Node {
    Op op;
    Tensor val;
    std::vector<double> grad;
    NodeId a = 0, b = 0, c = 0;
    double s0 = 0.0, s1 = 0.0;
    std::vector<std::size_t> idx;
    Tensor* bound = nullptr;
  };

  NodeId push(Node n);
  const Node& at(NodeId id) const;
  static void require(bool ok, const char* msg);

  std::vector<Node> nodes_;
  bool used_ = false;
};

}  // namespace adv

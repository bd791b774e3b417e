#include "adventurer/graph.hpp"

#include <cmath>
#include <stdexcept>

#include "adventurer/kernels.hpp"

namespace adv {

void Tape::require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(std::string("tape: ") + msg);
}

const Tape::Node& Tape::at(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("tape: bad node id");
  return nodes_[id];
}

NodeId Tape::push(Node n) {
  check_finite(n.val, "tape node value");
  n.grad.assign(n.val.numel(), 0.0);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

double Tape::scalar(NodeId id) const {
  const Node& n = at(id);
  require(n.val.numel() == 1, "scalar() on non-scalar node");
  return n.val.data[0];
}

NodeId Tape::constant(Tensor t) {
  Node n;
  n.op = Op::kConst;
  n.val = std::move(t);
  return push(std::move(n));
}

NodeId Tape::param(ParamSet& ps, const std::string& name) {
  Node n;
  n.op = Op::kParam;
  Tensor& t = ps.at(name);
  n.val = Tensor(t.shape, t.data);
  n.bound = &t;
  return push(std::move(n));
}

NodeId Tape::affine(NodeId x, NodeId w, NodeId b) {
  const Node& nx = at(x);
  const Node& nw = at(w);
  const Node& nb = at(b);
  require(nx.val.shape.size() == 2 && nw.val.shape.size() == 2 &&
              nb.val.shape.size() == 1,
          "affine: want x[B,I], w[O,I], b[O]");
  std::size_t B = nx.val.shape[0], I = nx.val.shape[1];
  std::size_t O = nw.val.shape[0];
  require(nw.val.shape[1] == I && nb.val.shape[0] == O,
          "affine: shape mismatch");
  Node n;
  n.op = Op::kAffine;
  n.a = x;
  n.b = w;
  n.c = b;
  n.val = Tensor::zeros({B, O});
  affine_forward(nx.val.data.data(), nw.val.data.data(), nb.val.data.data(),
                 n.val.data.data(), B, I, O);
  return push(std::move(n));
}

NodeId Tape::tanh_(NodeId x) {
  Node n;
  n.op = Op::kTanh;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = std::tanh(v);
  return push(std::move(n));
}

NodeId Tape::relu(NodeId x) {
  Node n;
  n.op = Op::kRelu;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = v > 0.0 ? v : 0.0;
  return push(std::move(n));
}

NodeId Tape::leaky_relu(NodeId x, double slope) {
  Node n;
  n.op = Op::kLeakyRelu;
  n.a = x;
  n.s0 = slope;
  n.val = at(x).val;
  for (double& v : n.val.data) v = v > 0.0 ? v : slope * v;
  return push(std::move(n));
}

NodeId Tape::sigmoid(NodeId x) {
  Node n;
  n.op = Op::kSigmoid;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = stable_sigmoid(v);
  return push(std::move(n));
}

NodeId Tape::softplus(NodeId x) {
  Node n;
  n.op = Op::kSoftplus;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = stable_softplus(v);
  return push(std::move(n));
}

NodeId Tape::exp_(NodeId x) {
  Node n;
  n.op = Op::kExp;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = std::exp(v);
  return push(std::move(n));
}

NodeId Tape::log_(NodeId x) {
  Node n;
  n.op = Op::kLog;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = std::log(v);
  return push(std::move(n));
}

NodeId Tape::square(NodeId x) {
  Node n;
  n.op = Op::kSquare;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = v * v;
  return push(std::move(n));
}

NodeId Tape::abs_(NodeId x) {
  Node n;
  n.op = Op::kAbs;
  n.a = x;
  n.val = at(x).val;
  for (double& v : n.val.data) v = std::fabs(v);
  return push(std::move(n));
}

NodeId Tape::scale(NodeId x, double c) {
  Node n;
  n.op = Op::kScale;
  n.a = x;
  n.s0 = c;
  n.val = at(x).val;
  for (double& v : n.val.data) v *= c;
  return push(std::move(n));
}

NodeId Tape::add_scalar(NodeId x, double c) {
  Node n;
  n.op = Op::kAddScalar;
  n.a = x;
  n.s0 = c;
  n.val = at(x).val;
  for (double& v : n.val.data) v += c;
  return push(std::move(n));
}

NodeId Tape::clamp(NodeId x, double lo, double hi) {
  require(lo <= hi, "clamp: lo > hi");
  Node n;
  n.op = Op::kClamp;
  n.a = x;
  n.s0 = lo;
  n.s1 = hi;
  n.val = at(x).val;
  for (double& v : n.val.data) v = v < lo ? lo : (v > hi ? hi : v);
  return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
  require(at(a).val.same_shape(at(b).val), "add: shape mismatch");
  Node n;
  n.op = Op::kAdd;
  n.a = a;
  n.b = b;
  n.val = at(a).val;
  const auto& bd = at(b).val.data;
  for (std::size_t i = 0; i < n.val.data.size(); ++i) n.val.data[i] += bd[i];
  return push(std::move(n));
}

NodeId Tape::sub(NodeId a, NodeId b) {
  require(at(a).val.same_shape(at(b).val), "sub: shape mismatch");
  Node n;
  n.op = Op::kSub;
  n.a = a;
  n.b = b;
  n.val = at(a).val;
  const auto& bd = at(b).val.data;
  for (std::size_t i = 0; i < n.val.data.size(); ++i) n.val.data[i] -= bd[i];
  return push(std::move(n));
}

NodeId Tape::mul(NodeId a, NodeId b) {
  require(at(a).val.same_shape(at(b).val), "mul: shape mismatch");
  Node n;
  n.op = Op::kMul;
  n.a = a;
  n.b = b;
  n.val = at(a).val;
  const auto& bd = at(b).val.data;
  for (std::size_t i = 0; i < n.val.data.size(); ++i) n.val.data[i] *= bd[i];
  return push(std::move(n));
}

NodeId Tape::div(NodeId a, NodeId b) {
  require(at(a).val.same_shape(at(b).val), "div: shape mismatch");
  Node n;
  n.op = Op::kDiv;
  n.a = a;
  n.b = b;
  n.val = at(a).val;
  const auto& bd = at(b).val.data;
  for (std::size_t i = 0; i < n.val.data.size(); ++i) n.val.data[i] /= bd[i];
  return push(std::move(n));
}

NodeId Tape::minimum(NodeId a, NodeId b) {
  require(at(a).val.same_shape(at(b).val), "minimum: shape mismatch");
  Node n;
  n.op = Op::kMin;
  n.a = a;
  n.b = b;
  n.val = at(a).val;
  const auto& bd = at(b).val.data;
  for (std::size_t i = 0; i < n.val.data.size(); ++i)
    n.val.data[i] = n.val.data[i] <= bd[i] ? n.val.data[i] : bd[i];
  return push(std::move(n));
}

NodeId Tape::add_scalar_node(NodeId x, NodeId s) {
  require(at(s).val.numel() == 1, "add_scalar_node: s must be scalar");
  Node n;
  n.op = Op::kAddScalarNode;
  n.a = x;
  n.b = s;
  n.val = at(x).val;
  double sv = at(s).val.data[0];
  for (double& v : n.val.data) v += sv;
  return push(std::move(n));
}

NodeId Tape::log_softmax(NodeId x) {
  const Node& nx = at(x);
  require(nx.val.shape.size() == 2, "log_softmax: want [B,N]");
  std::size_t B = nx.val.shape[0], N = nx.val.shape[1];
  Node n;
  n.op = Op::kLogSoftmax;
  n.a = x;
  n.val = nx.val;
  log_softmax_rows(n.val.data.data(), B, N);
  return push(std::move(n));
}

NodeId Tape::select_rows(NodeId x, const std::vector<std::size_t>& idx) {
  const Node& nx = at(x);
  require(nx.val.shape.size() == 2, "select_rows: want [B,N]");
  std::size_t B = nx.val.shape[0], N = nx.val.shape[1];
  require(idx.size() == B, "select_rows: index length != batch");
  Node n;
  n.op = Op::kSelectRows;
  n.a = x;
  n.idx = idx;
  n.val = Tensor::zeros({B});
  for (std::size_t r = 0; r < B; ++r) {
    require(idx[r] < N, "select_rows: index out of range");
    n.val.data[r] = nx.val.data[r * N + idx[r]];
  }
  return push(std::move(n));
}

NodeId Tape::sum_rows(NodeId x) {
  const Node& nx = at(x);
  require(nx.val.shape.size() == 2, "sum_rows: want [B,N]");
  std::size_t B = nx.val.shape[0], N = nx.val.shape[1];
  Node n;
  n.op = Op::kSumRows;
  n.a = x;
  n.val = Tensor::zeros({B});
  for (std::size_t r = 0; r < B; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += nx.val.data[r * N + j];
    n.val.data[r] = acc;
  }
  return push(std::move(n));
}

NodeId Tape::broadcast_row(NodeId v, std::size_t batch) {
  const Node& nv = at(v);
  require(nv.val.shape.size() == 1, "broadcast_row: want [N]");
  require(batch > 0, "broadcast_row: empty batch");
  std::size_t N = nv.val.shape[0];
  Node n;
  n.op = Op::kBroadcastRow;
  n.a = v;
  n.val = Tensor::zeros({batch, N});
  for (std::size_t r = 0; r < batch; ++r)
    for (std::size_t j = 0; j < N; ++j) n.val.data[r * N + j] = nv.val.data[j];
  return push(std::move(n));
}

NodeId Tape::concat_cols(NodeId a, NodeId b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  require(na.val.shape.size() == 2 && nb.val.shape.size() == 2,
          "concat_cols: want [B,M],[B,N]");
  require(na.val.shape[0] == nb.val.shape[0], "concat_cols: batch mismatch");
  std::size_t B = na.val.shape[0], M = na.val.shape[1], N = nb.val.shape[1];
  Node n;
  n.op = Op::kConcatCols;
  n.a = a;
  n.b = b;
  n.val = Tensor::zeros({B, M + N});
  for (std::size_t r = 0; r < B; ++r) {
    for (std::size_t j = 0; j < M; ++j)
      n.val.data[r * (M + N) + j] = na.val.data[r * M + j];
    for (std::size_t j = 0; j < N; ++j)
      n.val.data[r * (M + N) + M + j] = nb.val.data[r * N + j];
  }
  return push(std::move(n));
}

NodeId Tape::sum(NodeId x) {
  Node n;
  n.op = Op::kSum;
  n.a = x;
  double acc = 0.0;
  for (double v : at(x).val.data) acc += v;
  n.val = Tensor::scalar(acc);
  return push(std::move(n));
}

NodeId Tape::mean(NodeId x) {
  Node n;
  n.op = Op::kMean;
  n.a = x;
  double acc = 0.0;
  for (double v : at(x).val.data) acc += v;
  n.val = Tensor::scalar(acc / static_cast<double>(at(x).val.numel()));
  return push(std::move(n));
}

NodeId Tape::mean_abs(NodeId x) {
  Node n;
  n.op = Op::kMeanAbs;
  n.a = x;
  double acc = 0.0;
  for (double v : at(x).val.data) acc += std::fabs(v);
  n.val = Tensor::scalar(acc / static_cast<double>(at(x).val.numel()));
  return push(std::move(n));
}

NodeId Tape::mean_sq(NodeId x) {
  Node n;
  n.op = Op::kMeanSq;
  n.a = x;
  double acc = 0.0;
  for (double v : at(x).val.data) acc += v * v;
  n.val = Tensor::scalar(acc / static_cast<double>(at(x).val.numel()));
  return push(std::move(n));
}

void Tape::backward(NodeId out) {
  if (used_) throw std::runtime_error("tape: backward() called twice");
  used_ = true;
  Node& root = nodes_.at(out);
  require(root.val.numel() == 1, "backward: output must be scalar");
  root.grad[0] = 1.0;

  for (std::size_t k = nodes_.size(); k-- > 0;) {
    Node& n = nodes_[k];
    const std::vector<double>& g = n.grad;
    switch (n.op) {
      case Op::kConst:
        break;
      case Op::kParam: {
        for (std::size_t i = 0; i < g.size(); ++i) n.bound->grad[i] += g[i];
        break;
      }
      case Op::kAffine: {
        Node& nx = nodes_[n.a];
        Node& nw = nodes_[n.b];
        Node& nb = nodes_[n.c];
        std::size_t B = nx.val.shape[0], I = nx.val.shape[1];
        std::size_t O = nw.val.shape[0];
        for (std::size_t r = 0; r < B; ++r)
          for (std::size_t o = 0; o < O; ++o) {
            double go = g[r * O + o];
            if (go == 0.0) continue;
            const double* wr = nw.val.data.data() + o * I;
            const double* xr = nx.val.data.data() + r * I;
            double* dxr = nx.grad.data() + r * I;
            double* dwr = nw.grad.data() + o * I;
            for (std::size_t i = 0; i < I; ++i) {
              dxr[i] += go * wr[i];
              dwr[i] += go * xr[i];
            }
            nb.grad[o] += go;
          }
        break;
      }
      case Op::kTanh: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * (1.0 - n.val.data[i] * n.val.data[i]);
        break;
      }
      case Op::kRelu: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          if (nx.val.data[i] > 0.0) nx.grad[i] += g[i];
        break;
      }
      case Op::kLeakyRelu: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * (nx.val.data[i] > 0.0 ? 1.0 : n.s0);
        break;
      }
      case Op::kSigmoid: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * n.val.data[i] * (1.0 - n.val.data[i]);
        break;
      }
      case Op::kSoftplus: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * stable_sigmoid(nx.val.data[i]);
        break;
      }
      case Op::kExp: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * n.val.data[i];
        break;
      }
      case Op::kLog: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] / nx.val.data[i];
        break;
      }
      case Op::kSquare: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i)
          nx.grad[i] += g[i] * 2.0 * nx.val.data[i];
        break;
      }
      case Op::kAbs: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) {
          double x = nx.val.data[i];
          double s = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
          nx.grad[i] += g[i] * s;
        }
        break;
      }
      case Op::kScale: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) nx.grad[i] += g[i] * n.s0;
        break;
      }
      case Op::kAddScalar: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) nx.grad[i] += g[i];
        break;
      }
      case Op::kClamp: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) {
          double x = nx.val.data[i];
          if (x >= n.s0 && x <= n.s1) nx.grad[i] += g[i];
        }
        break;
      }
      case Op::kAdd: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        for (std::size_t i = 0; i < g.size(); ++i) {
          na.grad[i] += g[i];
          nb.grad[i] += g[i];
        }
        break;
      }
      case Op::kSub: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        for (std::size_t i = 0; i < g.size(); ++i) {
          na.grad[i] += g[i];
          nb.grad[i] -= g[i];
        }
        break;
      }
      case Op::kMul: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        for (std::size_t i = 0; i < g.size(); ++i) {
          na.grad[i] += g[i] * nb.val.data[i];
          nb.grad[i] += g[i] * na.val.data[i];
        }
        break;
      }
      case Op::kDiv: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        for (std::size_t i = 0; i < g.size(); ++i) {
          double bi = nb.val.data[i];
          na.grad[i] += g[i] / bi;
          nb.grad[i] -= g[i] * na.val.data[i] / (bi * bi);
        }
        break;
      }
      case Op::kMin: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (na.val.data[i] <= nb.val.data[i])
            na.grad[i] += g[i];
          else
            nb.grad[i] += g[i];
        }
        break;
      }
      case Op::kAddScalarNode: {
        Node& nx = nodes_[n.a];
        Node& ns = nodes_[n.b];
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          nx.grad[i] += g[i];
          acc += g[i];
        }
        ns.grad[0] += acc;
        break;
      }
      case Op::kLogSoftmax: {
        Node& nx = nodes_[n.a];
        std::size_t B = n.val.shape[0], N = n.val.shape[1];
        for (std::size_t r = 0; r < B; ++r) {
          double gsum = 0.0;
          for (std::size_t j = 0; j < N; ++j) gsum += g[r * N + j];
          for (std::size_t j = 0; j < N; ++j)
            nx.grad[r * N + j] +=
                g[r * N + j] - std::exp(n.val.data[r * N + j]) * gsum;
        }
        break;
      }
      case Op::kSelectRows: {
        Node& nx = nodes_[n.a];
        std::size_t N = nx.val.shape[1];
        for (std::size_t r = 0; r < g.size(); ++r)
          nx.grad[r * N + n.idx[r]] += g[r];
        break;
      }
      case Op::kSumRows: {
        Node& nx = nodes_[n.a];
        std::size_t N = nx.val.shape[1];
        for (std::size_t r = 0; r < g.size(); ++r)
          for (std::size_t j = 0; j < N; ++j) nx.grad[r * N + j] += g[r];
        break;
      }
      case Op::kBroadcastRow: {
        Node& nv = nodes_[n.a];
        std::size_t B = n.val.shape[0], N = n.val.shape[1];
        for (std::size_t r = 0; r < B; ++r)
          for (std::size_t j = 0; j < N; ++j) nv.grad[j] += g[r * N + j];
        break;
      }
      case Op::kConcatCols: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        std::size_t B = na.val.shape[0], M = na.val.shape[1];
        std::size_t N = nb.val.shape[1];
        for (std::size_t r = 0; r < B; ++r) {
          for (std::size_t j = 0; j < M; ++j)
            na.grad[r * M + j] += g[r * (M + N) + j];
          for (std::size_t j = 0; j < N; ++j)
            nb.grad[r * N + j] += g[r * (M + N) + M + j];
        }
        break;
      }
      case Op::kSum: {
        Node& nx = nodes_[n.a];
        for (std::size_t i = 0; i < nx.grad.size(); ++i) nx.grad[i] += g[0];
        break;
      }
      case Op::kMean: {
        Node& nx = nodes_[n.a];
        double c = g[0] / static_cast<double>(nx.val.numel());
        for (std::size_t i = 0; i < nx.grad.size(); ++i) nx.grad[i] += c;
        break;
      }
      case Op::kMeanAbs: {
        Node& nx = nodes_[n.a];
        double c = g[0] / static_cast<double>(nx.val.numel());
        for (std::size_t i = 0; i < nx.grad.size(); ++i) {
          double x = nx.val.data[i];
          double s = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
          nx.grad[i] += c * s;
        }
        break;
      }
      case Op::kMeanSq: {
        Node& nx = nodes_[n.a];
        double c = g[0] / static_cast<double>(nx.val.numel());
        for (std::size_t i = 0; i < nx.grad.size(); ++i)
          nx.grad[i] += c * 2.0 * nx.val.data[i];
        break;
      }
    }
  }

  for (const Node& n : nodes_) {
    if (n.op == Op::kParam) check_finite(n.bound->grad, "parameter gradient");
  }
}

}  // namespace adv

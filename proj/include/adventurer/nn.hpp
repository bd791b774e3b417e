#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "adventurer/graph.hpp"
#include "adventurer/rng.hpp"
#include "adventurer/tensor.hpp"

namespace adv {

enum class Act { kTanh, kRelu, kLeakyRelu };

// Fully connected net with a linear output layer. Parameters live in a
// ParamSet under "<prefix>w<k>" / "<prefix>b<k>". forward() records onto a
// tape; eval() runs the same arithmetic in the same order without one, so
// both paths produce bit-identical values.
class Mlp {
 public:
  Mlp(std::string prefix, std::vector<std::size_t> widths, Act act = Act::kTanh,
      double leaky_slope = 0.2);

  void init(ParamSet& ps, RandomStream& rng) const;

  NodeId forward(Tape& tape, ParamSet& ps, NodeId x) const;
  // When hiddens is non-null it receives each post-activation hidden layer
  // as a flat [B, width] matrix.
  std::vector<double> eval(const ParamSet& ps, const std::vector<double>& x,
                           std::size_t batch,
                           std::vector<std::vector<double>>* hiddens = nullptr) const;

  std::size_t in_dim() const { return widths_.front(); }
  std::size_t out_dim() const { return widths_.back(); }
  std::size_t layers() const { return widths_.size() - 1; }
  std::size_t hidden_width(std::size_t k) const { return widths_[k + 1]; }
  std::string weight_name(std::size_t layer) const;
  std::string bias_name(std::size_t layer) const;

 private:
  std::string prefix_;
  std::vector<std::size_t> widths_;
  Act act_;
  double leaky_slope_;
};

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Moment buffers keyed by parameter name; a single shared timestep. step()
// consumes the accumulated grads and bumps the ParamSet version.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(ParamSet& ps);
  std::uint64_t t() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::map<std::string, std::vector<double>> m_, v_;
  std::uint64_t t_ = 0;
};

struct FiniteDiffReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// loss_fn must build a fresh tape over the current parameter values, run
// backward, and return the scalar loss. Central differences; relative error
// uses max(1, |g|, |d|) in the denominator. max_per_param = 0 checks every
// scalar, otherwise an evenly strided subset per parameter.
FiniteDiffReport finite_diff_check(ParamSet& ps,
                                   const std::function<double()>& loss_fn,
                                   double h = 1e-5,
                                   std::size_t max_per_param = 0);

}  // namespace adv

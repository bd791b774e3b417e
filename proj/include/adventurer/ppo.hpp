#pragma once

#include <cstdint>
#include <vector>

#include "adventurer/env.hpp"
#include "adventurer/nn.hpp"
#include "adventurer/rng.hpp"

namespace adv {

struct PPOConfig {
  double clip = 0.2;
  double gamma_e = 0.99;
  double gamma_i = 0.95;
  double lambda = 0.95;
  double beta = 0.3;
  std::size_t epochs = 4;
  std::size_t minibatch = 64;
  double entropy_coef = 0.01;
  double lr = 3e-4;

  void validate() const;
};

// GAE(lambda) over one episode. values has length T+1: the appended entry is
// the bootstrap for a non-terminal cutoff (pass 0 after a true terminal).
// done[t] marks a true terminal at step t, which cuts both the bootstrap and
// the recursion.
std::vector<double> compute_gae(const std::vector<double>& rewards,
                                const std::vector<double>& values,
                                const std::vector<std::uint8_t>& dones,
                                double gamma, double lambda);

// Elementwise A_e + beta * A_i.
std::vector<double> augmented_advantage(const std::vector<double>& a_e,
                                        const std::vector<double>& a_i,
                                        double beta);

// In-place (A - mean) / (std + 1e-8) over the whole batch.
void normalize_advantages(std::vector<double>& adv);

struct ActResult {
  int action_d = 0;                // discrete choice
  std::vector<double> action_c;    // raw continuous sample (stored for logp)
  std::vector<double> env_action;  // clamped to the env's action bounds
  double logp = 0.0;
  double value_e = 0.0;
  double value_i = 0.0;
};

// One epoch's transitions, flattened across episodes.
struct RolloutBatch {
  std::size_t obs_dim = 0;
  bool discrete = true;
  std::size_t act_dim = 0;
  std::vector<double> obs;          // [T, obs_dim]
  std::vector<std::size_t> act_d;   // [T] when discrete
  std::vector<double> act_c;        // [T, act_dim] when continuous
  std::vector<double> old_logp;     // [T]
  std::vector<double> adv;          // [T], combined and normalized
  std::vector<double> ret_e;        // [T]
  std::vector<double> ret_i;        // [T]

  std::size_t size() const { return old_logp.size(); }
};

struct PpoStats {
  double policy_loss = 0.0;
  double value_e_loss = 0.0;
  double value_i_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

struct LossNodes {
  NodeId loss;          // scalar objective minimized by Adam
  NodeId surrogate;     // scalar clipped-surrogate value (maximized)
  NodeId ratio;         // [B] probability ratios
  NodeId entropy;       // scalar
  NodeId value_e_loss;  // scalar MSE of the extrinsic head
  NodeId value_i_loss;  // scalar MSE of the intrinsic head
};

// mean over the batch of min(ratio * adv, clamp(ratio, 1-eps, 1+eps) * adv).
NodeId build_surrogate(Tape& tape, NodeId ratio, const std::vector<double>& adv,
                       double eps);

// Policy with two value heads over one ParamSet. Action sampling and the
// stored log-probs run through the eval path, which shares its arithmetic
// with the tape, so freshly synced ratios are exactly 1.
class PpoAgent {
 public:
  PpoAgent(const EnvSpec& spec, const PPOConfig& cfg, std::uint64_t seed);

  ActResult act(const std::vector<double>& obs, RandomStream& rng) const;
  double value_e(const std::vector<double>& obs) const;
  double value_i(const std::vector<double>& obs) const;
  double logp_of(const std::vector<double>& obs, int action_d,
                 const std::vector<double>& action_c) const;

  PpoStats update(const RolloutBatch& batch);

  // Full PPO loss over a sub-batch; exposed for gradient verification.
  LossNodes build_loss(Tape& tape, const RolloutBatch& batch,
                       const std::vector<std::size_t>& rows);

  ParamSet& params() { return ps_; }
  const ParamSet& params() const { return ps_; }
  const PPOConfig& config() const { return cfg_; }

 private:
  std::vector<double> policy_out(const std::vector<double>& obs_flat,
                                 std::size_t batch) const;
  double logp_discrete(const std::vector<double>& logits_row, int a) const;
  double logp_gaussian(const std::vector<double>& mean_row,
                       const std::vector<double>& a) const;

  EnvSpec spec_;
  PPOConfig cfg_;
  Mlp policy_;
  Mlp value_e_net_;
  Mlp value_i_net_;
  ParamSet ps_;
  AdamState adam_;
  std::uint64_t update_seed_;
  std::uint64_t update_count_ = 0;
};

}  // namespace adv

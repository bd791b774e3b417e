#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adventurer/nn.hpp"
#include "adventurer/rng.hpp"

namespace adv {

// Bounded FIFO of visited observations; the empirical visited-state
// distribution the estimators train on. Sampling is uniform with
// replacement, so batches larger than the buffer are fine.
class StateBuffer {
 public:
  StateBuffer(std::size_t capacity, std::size_t obs_dim);

  void push(const std::vector<double>& obs);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return obs_dim_; }

  // Flat [batch, obs_dim] draw.
  std::vector<double> sample(std::size_t batch, RandomStream& rng) const;
  std::vector<double> row(std::size_t i) const;

 private:
  std::size_t capacity_, obs_dim_;
  std::vector<double> data_;  // ring storage, flat
  std::size_t size_ = 0, head_ = 0;
};

struct FitRecord {
  double loss_a = 0.0;  // bigan: d_loss;  rnd: mse;  vae: reconstruction
  double loss_b = 0.0;  // bigan: ge_loss; rnd: 0;    vae: kl
};

class NoveltyEstimator {
 public:
  virtual ~NoveltyEstimator() = default;
  virtual std::vector<FitRecord> fit(const StateBuffer& buffer,
                                     std::size_t steps) = 0;
  virtual double score(const std::vector<double>& obs) const = 0;
  virtual const std::string& method() const = 0;
  virtual std::uint64_t checksum() const = 0;
  // Named parameter sets to checkpoint; empty for parameter-free estimators.
  virtual std::vector<std::pair<std::string, const ParamSet*>> checkpoint_sets()
      const {
    return {};
  }
};

struct NoveltyOptions {
  std::string method = "bigan";
  double alpha = 0.9;
  std::size_t latent_dim = 0;  // 0 = auto: 32 for high-dim obs, 8 otherwise
  std::size_t batch = 64;
  double lr = 2e-4;
};

// Encoder E, generator G, and pair-discriminator D with the penultimate
// hidden layer exposed as the feature map f_D. Training alternates one D
// ascent step with one G,E step in the non-saturating form; the score is
//   B(s) = alpha * mean|s - G(E(s))|
//        + (1-alpha) * mean|f_D(s,E(s)) - f_D(G(E(s)),E(s))|.
// alpha only enters at score time, so differently weighted views of the
// same seed share identical nets.
class Bigan : public NoveltyEstimator {
 public:
  Bigan(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed,
        std::string method_name = "bigan");

  std::pair<double, double> train_step(const StateBuffer& buffer);
  std::vector<FitRecord> fit(const StateBuffer& buffer,
                             std::size_t steps) override;

  // Loss graphs of the two training phases over an explicit batch (s is
  // [batch, obs_dim] row-major, z is [batch, latent_dim]); exposed for
  // gradient verification. No parameters are stepped and no grads cleared.
  NodeId build_d_loss(Tape& tape, const std::vector<double>& s,
                      const std::vector<double>& z, std::size_t batch);
  NodeId build_ge_loss(Tape& tape, const std::vector<double>& s,
                       const std::vector<double>& z, std::size_t batch);
  double score(const std::vector<double>& obs) const override;
  // (L_G, L_D) parts of the score, for alpha sweeps over one training run.
  std::pair<double, double> score_components(const std::vector<double>& obs) const;

  const std::string& method() const override { return method_; }
  std::uint64_t checksum() const override;
  std::vector<std::pair<std::string, const ParamSet*>> checkpoint_sets()
      const override {
    return {{"bigan_ge", &ps_ge_}, {"bigan_d", &ps_d_}};
  }
  double alpha() const { return alpha_; }
  std::size_t latent_dim() const { return d_z_; }
  ParamSet& gen_enc_params() { return ps_ge_; }
  ParamSet& disc_params() { return ps_d_; }

 private:
  NodeId discriminator(Tape& tape, NodeId x, NodeId z);
  std::vector<double> f_d(const std::vector<double>& x,
                          const std::vector<double>& z, std::size_t batch) const;

  std::string method_;
  std::size_t obs_dim_, d_z_, batch_;
  double alpha_;
  Mlp gen_, enc_, disc_;
  ParamSet ps_ge_, ps_d_;
  AdamState adam_ge_, adam_d_;
  RandomStream stream_;
};

// Fixed random target net distilled into a trained predictor; the score is
// the mean squared prediction error.
class Rnd : public NoveltyEstimator {
 public:
  Rnd(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed);

  std::vector<FitRecord> fit(const StateBuffer& buffer,
                             std::size_t steps) override;
  double score(const std::vector<double>& obs) const override;
  const std::string& method() const override { return method_; }
  std::uint64_t checksum() const override;
  std::vector<std::pair<std::string, const ParamSet*>> checkpoint_sets()
      const override {
    return {{"rnd_target", &ps_target_}, {"rnd_pred", &ps_pred_}};
  }
  std::uint64_t target_checksum() const { return ps_target_.checksum(); }
  ParamSet& target_params() { return ps_target_; }
  ParamSet& predictor_params() { return ps_pred_; }

 private:
  std::string method_ = "rnd";
  std::size_t obs_dim_, batch_;
  Mlp target_, pred_;
  ParamSet ps_target_, ps_pred_;
  AdamState adam_;
  RandomStream stream_;
};

// Diagonal-Gaussian VAE; fit maximizes the ELBO (L2 reconstruction plus KL
// to the unit normal), scoring uses the posterior mean reconstruction's L1.
class Vae : public NoveltyEstimator {
 public:
  Vae(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed);

  std::vector<FitRecord> fit(const StateBuffer& buffer,
                             std::size_t steps) override;
  double score(const std::vector<double>& obs) const override;
  const std::string& method() const override { return method_; }
  std::uint64_t checksum() const override;
  std::vector<std::pair<std::string, const ParamSet*>> checkpoint_sets()
      const override {
    return {{"vae", &ps_}};
  }
  ParamSet& params() { return ps_; }

 private:
  std::string method_ = "vae";
  std::size_t obs_dim_, d_z_, batch_;
  double kl_weight_ = 1.0;
  Mlp enc_mu_, enc_lv_, dec_;
  ParamSet ps_;
  AdamState adam_;
  RandomStream stream_;
};

// method in {bigan, lg_only, ld_only, rnd, vae, none}; lg_only and ld_only
// are the alpha = 1 and alpha = 0 endpoints of the BiGAN score.
std::unique_ptr<NoveltyEstimator> make_estimator(std::size_t obs_dim,
                                                 const NoveltyOptions& opt,
                                                 std::uint64_t seed);

std::size_t auto_latent_dim(std::size_t obs_dim);

}  // namespace adv

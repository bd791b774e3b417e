#include "adventurer/ppo.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adventurer/kernels.hpp"

namespace adv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Shared by collection-time and tape-time Gaussian log-probs; both must add
// the same constant.
double gauss_const(std::size_t d) {
  return -0.5 * static_cast<double>(d) * std::log(kTwoPi);
}

}  // namespace

void PPOConfig::validate() const {
  if (!(clip > 0.0 && clip < 1.0))
    throw std::invalid_argument("ppo.clip must be in (0,1)");
  if (!(gamma_e > 0.0 && gamma_e <= 1.0))
    throw std::invalid_argument("ppo.gamma_e must be in (0,1]");
  if (!(gamma_i > 0.0 && gamma_i <= 1.0))
    throw std::invalid_argument("ppo.gamma_i must be in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("ppo.lambda must be in [0,1]");
  if (!(beta >= 0.0)) throw std::invalid_argument("ppo.beta must be >= 0");
  if (epochs < 1) throw std::invalid_argument("ppo.epochs must be >= 1");
  if (minibatch < 1) throw std::invalid_argument("ppo.minibatch must be >= 1");
  if (!(entropy_coef >= 0.0))
    throw std::invalid_argument("ppo.entropy must be >= 0");
  if (!(lr > 0.0)) throw std::invalid_argument("ppo.lr must be > 0");
}

std::vector<double> compute_gae(const std::vector<double>& rewards,
                                const std::vector<double>& values,
                                const std::vector<std::uint8_t>& dones,
                                double gamma, double lambda) {
  std::size_t t_len = rewards.size();
  if (dones.size() != t_len || values.size() != t_len + 1)
    throw std::invalid_argument("gae: length mismatch");
  std::vector<double> adv(t_len, 0.0);
  double running = 0.0;
  for (std::size_t t = t_len; t-- > 0;) {
    double cont = dones[t] ? 0.0 : 1.0;
    double delta = rewards[t] + gamma * cont * values[t + 1] - values[t];
    running = delta + gamma * lambda * cont * running;
    adv[t] = running;
  }
  return adv;
}

std::vector<double> augmented_advantage(const std::vector<double>& a_e,
                                        const std::vector<double>& a_i,
                                        double beta) {
  if (a_e.size() != a_i.size())
    throw std::invalid_argument("augmented_advantage: length mismatch");
  std::vector<double> out(a_e.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a_e[i] + beta * a_i[i];
  return out;
}

void normalize_advantages(std::vector<double>& adv) {
  if (adv.empty()) return;
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= static_cast<double>(adv.size());
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= static_cast<double>(adv.size());
  double denom = std::sqrt(var) + 1e-8;
  for (double& a : adv) a = (a - mean) / denom;
}

NodeId build_surrogate(Tape& tape, NodeId ratio, const std::vector<double>& adv,
                       double eps) {
  NodeId a = tape.constant(Tensor::vec(adv));
  NodeId unclipped = tape.mul(ratio, a);
  NodeId clipped = tape.mul(tape.clamp(ratio, 1.0 - eps, 1.0 + eps), a);
  return tape.mean(tape.minimum(unclipped, clipped));
}

PpoAgent::PpoAgent(const EnvSpec& spec, const PPOConfig& cfg, std::uint64_t seed)
    : spec_(spec),
      cfg_(cfg),
      policy_("policy/", {spec.obs_dim, 64, 64, spec.action_n}),
      value_e_net_("value_e/", {spec.obs_dim, 64, 64, 1}),
      value_i_net_("value_i/", {spec.obs_dim, 64, 64, 1}),
      adam_(AdamConfig{cfg.lr, 0.9, 0.999, 1e-8}),
      update_seed_(derive_seed(seed, "ppo-update")) {
  cfg_.validate();
  RandomStream rng(derive_seed(seed, "ppo-init"));
  policy_.init(ps_, rng);
  if (!spec_.discrete)
    ps_.add("policy/log_std", Tensor::full({spec_.action_n}, -0.5));
  value_e_net_.init(ps_, rng);
  value_i_net_.init(ps_, rng);
}

std::vector<double> PpoAgent::policy_out(const std::vector<double>& obs_flat,
                                         std::size_t batch) const {
  return policy_.eval(ps_, obs_flat, batch);
}

double PpoAgent::logp_discrete(const std::vector<double>& logits_row,
                               int a) const {
  std::vector<double> row = logits_row;
  log_softmax_rows(row.data(), 1, row.size());
  return row[static_cast<std::size_t>(a)];
}

// Mirrors the tape construction in build_loss term for term so that stored
// log-probs are bit-identical to the tape recomputation.
double PpoAgent::logp_gaussian(const std::vector<double>& mean_row,
                               const std::vector<double>& a) const {
  const Tensor& ls = ps_.at("policy/log_std");
  double s1 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double diff = a[d] - mean_row[d];
    double sig = std::exp(ls.data[d]);
    double z = diff / sig;
    double sq = z * z;
    s1 += sq * -0.5;
  }
  double s2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s2 += ls.data[d];
  double sneg = s2 * -1.0;
  return (s1 + sneg) + gauss_const(a.size());
}

ActResult PpoAgent::act(const std::vector<double>& obs,
                        RandomStream& rng) const {
  if (obs.size() != spec_.obs_dim)
    throw std::invalid_argument("act: observation dim mismatch");
  ActResult res;
  std::vector<double> out = policy_out(obs, 1);
  if (spec_.discrete) {
    std::vector<double> logp_row = out;
    log_softmax_rows(logp_row.data(), 1, logp_row.size());
    double u = rng.uniform();
    double cum = 0.0;
    int a = static_cast<int>(logp_row.size()) - 1;
    for (std::size_t j = 0; j < logp_row.size(); ++j) {
      cum += std::exp(logp_row[j]);
      if (u < cum) {
        a = static_cast<int>(j);
        break;
      }
    }
    res.action_d = a;
    res.logp = logp_row[static_cast<std::size_t>(a)];
  } else {
    const Tensor& ls = ps_.at("policy/log_std");
    res.action_c.resize(spec_.action_n);
    res.env_action.resize(spec_.action_n);
    for (std::size_t d = 0; d < spec_.action_n; ++d) {
      double sig = std::exp(ls.data[d]);
      res.action_c[d] = out[d] + sig * rng.normal();
      res.env_action[d] =
          std::clamp(res.action_c[d], spec_.action_low, spec_.action_high);
    }
    res.logp = logp_gaussian(out, res.action_c);
  }
  res.value_e = value_e(obs);
  res.value_i = value_i(obs);
  return res;
}

double PpoAgent::value_e(const std::vector<double>& obs) const {
  return value_e_net_.eval(ps_, obs, 1)[0];
}

double PpoAgent::value_i(const std::vector<double>& obs) const {
  return value_i_net_.eval(ps_, obs, 1)[0];
}

double PpoAgent::logp_of(const std::vector<double>& obs, int action_d,
                         const std::vector<double>& action_c) const {
  std::vector<double> out = policy_out(obs, 1);
  if (spec_.discrete) return logp_discrete(out, action_d);
  return logp_gaussian(out, action_c);
}

LossNodes PpoAgent::build_loss(Tape& tape, const RolloutBatch& batch,
                               const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw std::invalid_argument("ppo update: empty batch");
  std::size_t B = rows.size();
  std::vector<double> obs(B * batch.obs_dim);
  std::vector<double> old_logp(B), adv(B), ret_e(B), ret_i(B);
  std::vector<std::size_t> act_d(B);
  std::vector<double> act_c(B * batch.act_dim);
  for (std::size_t r = 0; r < B; ++r) {
    std::size_t i = rows[r];
    std::copy_n(batch.obs.begin() + static_cast<long>(i * batch.obs_dim),
                batch.obs_dim, obs.begin() + static_cast<long>(r * batch.obs_dim));
    old_logp[r] = batch.old_logp[i];
    adv[r] = batch.adv[i];
    ret_e[r] = batch.ret_e[i];
    ret_i[r] = batch.ret_i[i];
    if (batch.discrete) {
      act_d[r] = batch.act_d[i];
    } else {
      std::copy_n(batch.act_c.begin() + static_cast<long>(i * batch.act_dim),
                  batch.act_dim,
                  act_c.begin() + static_cast<long>(r * batch.act_dim));
    }
  }

  NodeId obs_node = tape.constant(Tensor({B, batch.obs_dim}, obs));
  NodeId logp;
  NodeId entropy;
  if (batch.discrete) {
    NodeId logits = policy_.forward(tape, ps_, obs_node);
    NodeId logp_all = tape.log_softmax(logits);
    logp = tape.select_rows(logp_all, act_d);
    NodeId ent_rows =
        tape.scale(tape.sum_rows(tape.mul(tape.exp_(logp_all), logp_all)), -1.0);
    entropy = tape.mean(ent_rows);
  } else {
    NodeId mean = policy_.forward(tape, ps_, obs_node);
    NodeId a = tape.constant(Tensor({B, batch.act_dim}, act_c));
    NodeId diff = tape.sub(a, mean);
    NodeId ls = tape.param(ps_, "policy/log_std");
    NodeId sig = tape.exp_(tape.broadcast_row(ls, B));
    NodeId z = tape.div(diff, sig);
    NodeId half = tape.scale(tape.square(z), -0.5);
    NodeId s1 = tape.sum_rows(half);
    NodeId sneg = tape.scale(tape.sum(ls), -1.0);
    logp = tape.add_scalar(tape.add_scalar_node(s1, sneg),
                           gauss_const(batch.act_dim));
    entropy = tape.add_scalar(
        tape.sum(ls),
        0.5 * static_cast<double>(batch.act_dim) * (1.0 + std::log(kTwoPi)));
  }

  NodeId ratio = tape.exp_(tape.sub(logp, tape.constant(Tensor::vec(old_logp))));
  NodeId surrogate = build_surrogate(tape, ratio, adv, cfg_.clip);

  NodeId ve = value_e_net_.forward(tape, ps_, obs_node);
  NodeId vi = value_i_net_.forward(tape, ps_, obs_node);
  NodeId le = tape.mean_sq(tape.sub(ve, tape.constant(Tensor({B, 1}, ret_e))));
  NodeId li = tape.mean_sq(tape.sub(vi, tape.constant(Tensor({B, 1}, ret_i))));

  NodeId loss = tape.add(
      tape.add(tape.scale(surrogate, -1.0), tape.scale(entropy, -cfg_.entropy_coef)),
      tape.add(tape.scale(le, 0.5), tape.scale(li, 0.5)));
  return {loss, surrogate, ratio, entropy, le, li};
}

PpoStats PpoAgent::update(const RolloutBatch& batch) {
  std::size_t total = batch.size();
  if (total == 0) throw std::invalid_argument("ppo update: empty batch");
  RandomStream shuffle_rng(
      derive_seed(update_seed_, "shuffle", update_count_++));

  PpoStats stats;
  double weight = 0.0;
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t e = 0; e < cfg_.epochs; ++e) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < total; start += cfg_.minibatch) {
      std::size_t stop = std::min(start + cfg_.minibatch, total);
      std::vector<std::size_t> rows(order.begin() + static_cast<long>(start),
                                    order.begin() + static_cast<long>(stop));
      Tape tape;
      LossNodes nodes = build_loss(tape, batch, rows);
      double b = static_cast<double>(rows.size());

      const std::vector<double>& rv = tape.val(nodes.ratio).data;
      double clipped = 0.0;
      for (double r : rv)
        if (std::fabs(r - 1.0) > cfg_.clip) clipped += 1.0;

      stats.policy_loss += -tape.scalar(nodes.surrogate) * b;
      stats.entropy += tape.scalar(nodes.entropy) * b;
      stats.value_e_loss += tape.scalar(nodes.value_e_loss) * b;
      stats.value_i_loss += tape.scalar(nodes.value_i_loss) * b;
      stats.clip_fraction += clipped;
      weight += b;

      tape.backward(nodes.loss);
      adam_.step(ps_);
      ps_.zero_grads();
    }
  }
  stats.policy_loss /= weight;
  stats.entropy /= weight;
  stats.value_e_loss /= weight;
  stats.value_i_loss /= weight;
  stats.clip_fraction /= weight;
  return stats;
}

}  // namespace adv

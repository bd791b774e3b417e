#include "adventurer/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "adventurer/checkpoint.hpp"
#include "adventurer/env.hpp"
#include "adventurer/reward.hpp"
#include "adventurer/rng.hpp"
#include "json.hpp"

namespace adv {

std::string EpochMetrics::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["episodes"] = episodes;
  j["env_steps"] = env_steps;
  j["mean_return"] = mean_return;
  j["success_rate"] = success_rate;
  j["mean_b"] = mean_b;
  j["max_b"] = max_b;
  j["mu_b"] = mu_b;
  j["sigma_b"] = sigma_b;
  j["mu_re"] = mu_re;
  j["loss_policy"] = loss_policy;
  j["loss_value_e"] = loss_value_e;
  j["loss_value_i"] = loss_value_i;
  j["entropy"] = entropy;
  j["clip_fraction"] = clip_fraction;
  j["novelty_loss_a"] = novelty_loss_a;
  j["novelty_loss_b"] = novelty_loss_b;
  j["memory_size"] = memory_size;
  return j.dump();
}

namespace {

// One collected episode; value arrays carry the extra bootstrap entry.
struct Episode {
  std::vector<double> obs;
  std::vector<std::size_t> act_d;
  std::vector<double> act_c;
  std::vector<double> logp;
  std::vector<double> rew_e;
  std::vector<double> b_raw;
  std::vector<std::uint8_t> goal;
  std::vector<double> val_e, val_i;
  bool success = false;
  double ret = 0.0;

  std::size_t length() const { return logp.size(); }
};

}  // namespace

TrainResult train(const Config& cfg, const std::string& out_dir) {
  cfg.validate();

  const auto L = static_cast<std::size_t>(cfg.get_int("train.epochs"));
  const auto N = static_cast<std::size_t>(cfg.get_int("train.episodes"));
  const auto H = static_cast<std::size_t>(cfg.get_int("train.horizon"));
  const std::uint64_t root = cfg.get_uint("train.seed");
  const NormalizeVariant variant = cfg.normalize_variant();
  const PPOConfig pcfg = cfg.ppo();
  const NoveltyOptions nopt = cfg.novelty();
  const bool intrinsic_on = nopt.method != "none";
  const auto fit_steps =
      static_cast<std::size_t>(cfg.get_int("bigan.steps_per_epoch"));

  auto env = make_env(cfg.env_name(), cfg.env_params(), H);
  const EnvSpec& spec = env->spec();
  PpoAgent agent(spec, pcfg, derive_seed(root, "agent"));
  auto estimator =
      make_estimator(spec.obs_dim, nopt, derive_seed(root, "novelty"));
  StateBuffer buffer(
      static_cast<std::size_t>(cfg.get_int("bigan.buffer_capacity")),
      spec.obs_dim);
  EpisodicMemory memory(static_cast<std::size_t>(cfg.get_int("memory.k")),
                        cfg.get_bool("memory.enabled"));
  RunningStats stats_b, stats_re;
  RandomStream act_stream = derive_stream(root, "action");
  RandomStream mem_stream = derive_stream(root, "memory");

  std::ofstream metrics_out, timings_out;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream cfg_out(out_dir + "/config.txt");
    cfg_out << cfg.text();
    if (!cfg_out) throw std::runtime_error("cannot write " + out_dir + "/config.txt");
    metrics_out.open(out_dir + "/metrics.jsonl");
    timings_out.open(out_dir + "/timings.jsonl");
    if (!metrics_out || !timings_out)
      throw std::runtime_error("cannot open metrics outputs in " + out_dir);
  }

  TrainResult result;
  result.out_dir = out_dir;
  std::size_t cum_episodes = 0, cum_steps = 0;

  for (std::size_t epoch = 0; epoch < L; ++epoch) {
    try {
      auto t0 = std::chrono::steady_clock::now();
      EpochAudit audit;
      std::vector<Episode> episodes(N);
      RunningStats epoch_b, epoch_re;

      for (std::size_t ep = 0; ep < N; ++ep) {
        Episode& e = episodes[ep];
        std::vector<double> obs;
        const MemoryEntry* entry = memory.sample_start(mem_stream);
        if (entry != nullptr)
          obs = env->restore_as_start(entry->snapshot);
        else
          obs = env->reset(derive_seed(root, "reset", epoch, ep));
        buffer.push(obs);

        while (!env->done()) {
          ActResult a = agent.act(obs, act_stream);
          Transition tr =
              spec.discrete ? env->step(a.action_d) : env->step(a.env_action);
          double b = estimator->score(tr.obs);
          ++audit.b_evals;
          buffer.push(tr.obs);
          // Terminal states are dead restarts (the goal pays again on the
          // next step), so they never enter the episodic memory.
          if (memory.enabled() && !tr.goal) memory.offer(env->snapshot(), b);

          e.obs.insert(e.obs.end(), obs.begin(), obs.end());
          if (spec.discrete)
            e.act_d.push_back(static_cast<std::size_t>(a.action_d));
          else
            e.act_c.insert(e.act_c.end(), a.action_c.begin(), a.action_c.end());
          e.logp.push_back(a.logp);
          e.val_e.push_back(a.value_e);
          e.val_i.push_back(a.value_i);
          e.rew_e.push_back(tr.reward);
          e.b_raw.push_back(b);
          e.goal.push_back(tr.goal ? 1 : 0);
          e.ret += tr.reward;
          if (tr.goal) e.success = true;
          epoch_b.push(b);
          epoch_re.push(tr.reward);
          obs = tr.obs;
          ++audit.env_steps;
        }
        e.val_e.push_back(agent.value_e(obs));
        e.val_i.push_back(agent.value_i(obs));
      }

      // Epoch-boundary phase: stats update first, then the stored raw
      // scores convert under the updated stats.
      stats_b.merge(epoch_b);
      stats_re.merge(epoch_re);
      ++audit.stats_updates;

      RolloutBatch batch;
      batch.obs_dim = spec.obs_dim;
      batch.discrete = spec.discrete;
      batch.act_dim = spec.action_n;
      std::vector<double> adv_combined;
      for (Episode& e : episodes) {
        const std::size_t t_len = e.length();
        std::vector<double> r_i(t_len, 0.0);
        if (intrinsic_on)
          for (std::size_t t = 0; t < t_len; ++t)
            r_i[t] = normalize_bonus(e.b_raw[t], stats_b, stats_re, variant);
        std::vector<double> adv_e =
            compute_gae(e.rew_e, e.val_e, e.goal, pcfg.gamma_e, pcfg.lambda);
        std::vector<std::uint8_t> no_dones(t_len, 0);
        std::vector<double> adv_i =
            compute_gae(r_i, e.val_i, no_dones, pcfg.gamma_i, pcfg.lambda);
        std::vector<double> adv =
            augmented_advantage(adv_e, adv_i, pcfg.beta);

        batch.obs.insert(batch.obs.end(), e.obs.begin(), e.obs.end());
        batch.act_d.insert(batch.act_d.end(), e.act_d.begin(), e.act_d.end());
        batch.act_c.insert(batch.act_c.end(), e.act_c.begin(), e.act_c.end());
        batch.old_logp.insert(batch.old_logp.end(), e.logp.begin(),
                              e.logp.end());
        adv_combined.insert(adv_combined.end(), adv.begin(), adv.end());
        for (std::size_t t = 0; t < t_len; ++t) {
          batch.ret_e.push_back(adv_e[t] + e.val_e[t]);
          batch.ret_i.push_back(adv_i[t] + e.val_i[t]);
        }
      }
      normalize_advantages(adv_combined);
      batch.adv = std::move(adv_combined);

      PpoStats ppo_stats = agent.update(batch);
      ++audit.ppo_updates;

      std::vector<FitRecord> fit_hist = estimator->fit(buffer, fit_steps);
      ++audit.novelty_updates;

      EpochMetrics m;
      m.epoch = epoch;
      cum_episodes += N;
      cum_steps += audit.env_steps;
      m.episodes = cum_episodes;
      m.env_steps = cum_steps;
      double sum_ret = 0.0, successes = 0.0;
      for (const Episode& e : episodes) {
        sum_ret += e.ret;
        successes += e.success ? 1.0 : 0.0;
      }
      m.mean_return = sum_ret / static_cast<double>(N);
      m.success_rate = successes / static_cast<double>(N);
      m.mean_b = epoch_b.mean();
      double max_b = 0.0;
      bool first = true;
      for (const Episode& e : episodes)
        for (double b : e.b_raw) {
          if (first || b > max_b) max_b = b;
          first = false;
        }
      m.max_b = max_b;
      m.mu_b = stats_b.mean();
      m.sigma_b = stats_b.std();
      m.mu_re = stats_re.mean();
      m.loss_policy = ppo_stats.policy_loss;
      m.loss_value_e = ppo_stats.value_e_loss;
      m.loss_value_i = ppo_stats.value_i_loss;
      m.entropy = ppo_stats.entropy;
      m.clip_fraction = ppo_stats.clip_fraction;
      double la = 0.0, lb = 0.0;
      for (const FitRecord& r : fit_hist) {
        la += r.loss_a;
        lb += r.loss_b;
      }
      if (!fit_hist.empty()) {
        la /= static_cast<double>(fit_hist.size());
        lb /= static_cast<double>(fit_hist.size());
      }
      m.novelty_loss_a = la;
      m.novelty_loss_b = lb;
      m.memory_size = memory.write_buffer().size();
      memory.rollover();

      m.wall_clock_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      if (metrics_out.is_open()) {
        metrics_out << m.to_json() << "\n";
        metrics_out.flush();
        timings_out << "{\"epoch\":" << epoch << ",\"wall_clock_s\":"
                    << m.wall_clock_s << "}\n";
        timings_out.flush();
      }
      result.history.push_back(std::move(m));
      result.audit.push_back(audit);
    } catch (const std::exception& e) {
      throw std::runtime_error("epoch " + std::to_string(epoch) + ": " +
                               e.what());
    }
  }

  if (!out_dir.empty()) {
    save_checkpoint(out_dir + "/policy.ckpt", agent.params());
    for (const auto& [name, ps] : estimator->checkpoint_sets())
      save_checkpoint(out_dir + "/" + name + ".ckpt", *ps);
  }
  return result;
}

}  // namespace adv

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adventurer/config.hpp"
#include "adventurer/novelty.hpp"
#include "adventurer/ppo.hpp"

namespace adv {

// One metrics line per training epoch. Everything except wall_clock_s is a
// pure function of config + seed; wall_clock_s goes to a timings sidecar so
// metrics.jsonl stays byte-identical across reruns.
struct EpochMetrics {
  std::size_t epoch = 0;
  std::size_t episodes = 0;   // cumulative
  std::size_t env_steps = 0;  // cumulative
  double mean_return = 0.0;   // extrinsic only
  double success_rate = 0.0;
  double mean_b = 0.0;
  double max_b = 0.0;
  double mu_b = 0.0;
  double sigma_b = 0.0;
  double mu_re = 0.0;
  double loss_policy = 0.0;
  double loss_value_e = 0.0;
  double loss_value_i = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double novelty_loss_a = 0.0;
  double novelty_loss_b = 0.0;
  std::size_t memory_size = 0;
  double wall_clock_s = 0.0;

  std::string to_json() const;  // fixed key order, wall clock excluded
};

// Loop-fidelity counters: per epoch there is exactly one stats update, one
// policy update, and one estimator update, and the novelty score runs
// exactly once per environment step.
struct EpochAudit {
  std::size_t env_steps = 0;
  std::size_t b_evals = 0;
  std::size_t stats_updates = 0;
  std::size_t ppo_updates = 0;
  std::size_t novelty_updates = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
  std::vector<EpochAudit> audit;
  std::string out_dir;  // empty when nothing was written
};

// Full training loop. out_dir = "" runs in memory only; otherwise writes
// metrics.jsonl, timings.jsonl, config.txt, and final checkpoints there.
TrainResult train(const Config& cfg, const std::string& out_dir);

// Two synthetic "rooms": per room a fixed random bit template over the maze
// observation space, each sample flips 5% of its bits. Partition sizes are
// all equal; generation is a pure function of the seed.
struct Corpus {
  std::size_t obs_dim = 0;
  std::vector<std::vector<double>> d1a, d1b, d2a, d2b;
};

Corpus make_two_room_corpus(std::size_t samples_per_part, std::uint64_t seed);

// KL(P||Q) between histograms of the two score lists over shared equal-width
// bin edges on [lo, hi]; additive smoothing on the counts, natural log.
double histogram_kl(const std::vector<double>& p, const std::vector<double>& q,
                    std::size_t bins, double lo, double hi, double smoothing);

// Tie-corrected Spearman rank correlation.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Distribution-separation experiment. Setting 1 trains on d1a and scores
// {d1a, d1b, d2b}; its objective KL(d1b||d1a) - KL(d2b||d1a) is negative
// when the estimator separates the unseen room from the seen one. Setting 2
// trains on d1a + d2a and scores all four parts; its objective
// KL(d1b||d1a) + KL(d2b||d2a) is small when both seen rooms stay familiar.
// Scores are min-max normalized over each setting's pooled evaluation sets;
// a degenerate pool (all scores equal) is flagged and its KLs are 0.
struct SettingsResult {
  double objective1 = 0.0;
  double objective2 = 0.0;
  bool degenerate1 = false;
  bool degenerate2 = false;
  std::map<std::string, std::vector<double>> scores1, scores2;  // normalized
};

SettingsResult eval_novelty_settings(const Corpus& corpus,
                                     const NoveltyOptions& opt,
                                     std::size_t fit_steps, std::uint64_t seed);

// Alpha enters the BiGAN score only at composition time, so one training per
// setting serves every alpha in the grid.
struct AlphaCell {
  double alpha = 0.0;
  double objective1 = 0.0;
  double objective2 = 0.0;
};

std::vector<AlphaCell> alpha_sweep(const Corpus& corpus,
                                   const NoveltyOptions& base,
                                   const std::vector<double>& alphas,
                                   std::size_t fit_steps, std::uint64_t seed);

// Novelty-vs-familiarity curve: for each fraction p a fresh estimator trains
// on all of class0 plus the first p-fraction of class1_train, then scores
// the held-out class1_eval. self_score is class0 scored by the p=0
// estimator, the familiar-data baseline.
struct CountVsScoreResult {
  std::vector<double> fractions;
  std::vector<double> mean_scores;
  double self_score = 0.0;
};

CountVsScoreResult count_vs_score(
    const std::vector<std::vector<double>>& class0,
    const std::vector<std::vector<double>>& class1_train,
    const std::vector<std::vector<double>>& class1_eval,
    const std::vector<double>& fractions, const NoveltyOptions& opt,
    std::size_t fit_steps, std::uint64_t seed);

struct GridRow {
  double value = 0.0;
  std::size_t replicate = 0;
  double metric1 = 0.0;  // alpha: setting-1 objective; beta: mean return
  double metric2 = 0.0;  // alpha: setting-2 objective; beta: unused
};

struct GridResult {
  std::string param;
  std::vector<double> values;
  double best = 0.0;
  std::vector<GridRow> rows;
  std::string csv;  // RFC 4180, CRLF line endings
};

// param "alpha": per replicate one BiGAN training per setting, objectives
// composed per alpha; best minimizes the mean summed objective. param
// "beta": one full training run per (value, replicate); best maximizes the
// mean return over the last quarter of epochs.
GridResult grid_search(const std::string& param,
                       const std::vector<double>& values, const Config& cfg);

struct PlotResult {
  std::size_t charts = 0;
  std::size_t warnings = 0;  // malformed metrics lines skipped
};

// Aggregates every *.jsonl under in_dir (one level deep) into per-metric
// mean +- std series across files, emitting one SVG per metric and one
// combined CSV into out_dir.
PlotResult emit_plots(const std::string& in_dir, const std::string& out_dir);

}  // namespace adv

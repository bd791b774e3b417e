#pragma once

#include <cstdint>
#include <vector>

#include "adventurer/rng.hpp"

namespace adv {

// Welford accumulator with Chan-style merge; population variance.
class RunningStats {
 public:
  void push(double x) {
    ++count_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    double na = static_cast<double>(count_), nb = static_cast<double>(o.count_);
    double delta = o.mean_ - mean_;
    double n = na + nb;
    mean_ += delta * nb / n;
    m2_ += o.m2_ + delta * delta * na * nb / n;
    count_ += o.count_;
  }

  std::size_t count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : mean_; }
  double var() const {
    return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_);
  }
  double std() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

enum class NormalizeVariant { kPaper, kShifted };

// Converts a raw novelty score to an intrinsic reward:
//   paper:   (B - mu_B + mu_re) / sigma_B      (formula as printed)
//   shifted: (B - mu_B) / sigma_B + mu_re      (mean lands at mu_re)
// sigma floored at 1e-8. Before the B stream has two samples the stats are
// undefined and the warm-up rule mu_B = 0, sigma = 1, mu_re = 0 applies.
double normalize_bonus(double b, const RunningStats& b_stats,
                       const RunningStats& re_stats, NormalizeVariant variant);

struct MemoryEntry {
  std::vector<std::uint8_t> snapshot;
  double score = 0.0;
  std::uint64_t seq = 0;  // offer index that first achieved this score
};

// Double-buffered top-K store of the most novel snapshots. The write buffer
// collects this epoch's offers; rollover() publishes it as the read buffer
// sampled by the next epoch's episode starts. A snapshot already present is
// updated only by a strictly larger score; a full buffer admits a new
// snapshot only above the current minimum, evicting that minimum (the
// latest-added one among ties).
class EpisodicMemory {
 public:
  EpisodicMemory(std::size_t k, bool enabled) : k_(k), enabled_(enabled) {}

  bool offer(const std::vector<std::uint8_t>& snapshot, double score);
  void rollover();

  // Uniform draw from the read buffer; null when disabled, before the first
  // rollover, or when the buffer is empty — callers fall back to env.reset.
  const MemoryEntry* sample_start(RandomStream& rng) const;

  const std::vector<MemoryEntry>& read_buffer() const { return read_; }
  const std::vector<MemoryEntry>& write_buffer() const { return write_; }
  std::size_t capacity() const { return k_; }
  bool enabled() const { return enabled_; }
  std::size_t epochs_completed() const { return rollovers_; }

 private:
  std::size_t k_;
  bool enabled_;
  std::vector<MemoryEntry> write_, read_;
  std::uint64_t next_seq_ = 0;
  std::size_t rollovers_ = 0;
};

}  // namespace adv

#include "adventurer/reward.hpp"

#include <cmath>

namespace adv {

double RunningStats::std() const { return std::sqrt(var()); }

double normalize_bonus(double b, const RunningStats& b_stats,
                       const RunningStats& re_stats,
                       NormalizeVariant variant) {
  double mu_b = 0.0, sigma = 1.0, mu_re = 0.0;
  if (b_stats.count() >= 2) {
    mu_b = b_stats.mean();
    sigma = b_stats.std();
    if (sigma < 1e-8) sigma = 1e-8;
    mu_re = re_stats.mean();
  }
  if (variant == NormalizeVariant::kPaper) return (b - mu_b + mu_re) / sigma;
  return (b - mu_b) / sigma + mu_re;
}

bool EpisodicMemory::offer(const std::vector<std::uint8_t>& snapshot,
                           double score) {
  std::uint64_t seq = next_seq_++;
  if (k_ == 0) return false;

  for (MemoryEntry& e : write_) {
    if (e.snapshot == snapshot) {
      if (score > e.score) {
        e.score = score;
        e.seq = seq;
        return true;
      }
      return false;
    }
  }

  if (write_.size() < k_) {
    write_.push_back({snapshot, score, seq});
    return true;
  }

  std::size_t victim = 0;
  for (std::size_t i = 1; i < write_.size(); ++i) {
    const MemoryEntry& e = write_[i];
    const MemoryEntry& v = write_[victim];
    if (e.score < v.score || (e.score == v.score && e.seq > v.seq)) victim = i;
  }
  if (score <= write_[victim].score) return false;
  write_[victim] = {snapshot, score, seq};
  return true;
}

void EpisodicMemory::rollover() {
  read_ = std::move(write_);
  write_.clear();
  ++rollovers_;
}

const MemoryEntry* EpisodicMemory::sample_start(RandomStream& rng) const {
  if (!enabled_ || rollovers_ < 1 || read_.empty()) return nullptr;
  int i = rng.randint(static_cast<int>(read_.size()));
  return &read_[static_cast<std::size_t>(i)];
}

}  // namespace adv

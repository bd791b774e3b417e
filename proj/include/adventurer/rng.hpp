#pragma once

// Deterministic random streams. Every stochastic draw in a run flows from one
// root seed through derive_seed(root, tag, a, b): the tag names the consumer
// ("env", "policy-init", "ppo-shuffle", ...) and a/b index epoch/episode/step.
// Distributions are hand-rolled on top of mt19937_64 raw output so that
// sequences do not depend on the standard library's unspecified algorithms.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace adv {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ root;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  h = splitmix64(h);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int randint(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(u64()) *
                             static_cast<unsigned __int128>(n)) >> 64);
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  void fill_normal(std::vector<double>& out) {
    for (double& v : out) v = normal();
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<std::size_t>(i)],
                v[static_cast<std::size_t>(randint(i + 1))]);
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

inline RandomStream derive_stream(std::uint64_t root, std::string_view tag,
                                  std::uint64_t a = 0, std::uint64_t b = 0) {
  return RandomStream(derive_seed(root, tag, a, b));
}

}  // namespace adv

#include "adventurer/tensor.hpp"

#include <cmath>
#include <cstring>

namespace adv {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x))
      throw std::runtime_error(std::string("non-finite value in ") + what);
  }
}

std::uint64_t ParamSet::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& [name, t] : params_) {
    mix(name.data(), name.size());
    for (double x : t.data) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      mix(&bits, sizeof bits);
    }
  }
  return h;
}

}  // namespace adv

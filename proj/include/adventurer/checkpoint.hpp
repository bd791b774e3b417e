#pragma once

#include <string>

#include "adventurer/tensor.hpp"

namespace adv {

// Binary parameter snapshot, little-endian throughout:
//   magic "ADVK", version u32, entry count u32, then per entry:
//   name_len u32, name bytes, rank u32, extents u64 each, payload f64
//   row-major. Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const ParamSet& ps);
ParamSet load_checkpoint(const std::string& path);

}  // namespace adv

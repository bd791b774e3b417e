#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "adventurer/env.hpp"
#include "adventurer/novelty.hpp"
#include "adventurer/ppo.hpp"
#include "adventurer/reward.hpp"

namespace adv {

// Flat dotted-key = value run configuration. Every key has a built-in
// default; setting or loading an unknown key is an error, so typos fail
// loudly. '#' starts a comment, blank lines are ignored.
class Config {
 public:
  Config();  // all defaults

  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  long long get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  // Typed views over the table; each validates its own block.
  std::string env_name() const;
  EnvParams env_params() const;
  PPOConfig ppo() const;
  NoveltyOptions novelty() const;
  NormalizeVariant normalize_variant() const;

  // Cross-field invariants: loop bounds >= 1, enum values legal, ppo block
  // self-consistent.
  void validate() const;

  // Canonical sorted "key = value" dump; loading it back reproduces *this.
  std::string text() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace adv

#include "adventurer/config.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace adv {

namespace {

const std::vector<std::pair<const char*, const char*>>& default_table() {
  static const std::vector<std::pair<const char*, const char*>> t = {
      {"env.name", "sparse_chain"},
      {"env.chain_n", "20"},
      {"env.maze_seed", "1"},
      {"env.goal_radius", "0.1"},
      {"env.step_scale", "0.1"},
      {"env.dense_reward", "false"},
      {"train.epochs", "20"},
      {"train.episodes", "16"},
      {"train.horizon", "40"},
      {"train.seed", "1"},
      {"ppo.clip", "0.2"},
      {"ppo.gamma_e", "0.99"},
      {"ppo.gamma_i", "0.95"},
      {"ppo.lambda", "0.95"},
      {"ppo.beta", "0.3"},
      {"ppo.epochs", "4"},
      {"ppo.minibatch", "64"},
      {"ppo.entropy", "0.01"},
      {"ppo.lr", "3e-4"},
      {"novelty.method", "bigan"},
      {"novelty.batch", "64"},
      {"novelty.lr", "2e-4"},
      {"bigan.alpha", "0.9"},
      {"bigan.latent_dim", "0"},
      {"bigan.buffer_capacity", "50000"},
      {"bigan.steps_per_epoch", "32"},
      {"memory.enabled", "false"},
      {"memory.k", "64"},
      {"normalize.variant", "paper"},
      {"eval.samples", "512"},
      {"eval.steps", "600"},
      {"eval.seeds", "6"},
      {"out.dir", "runs/out"},
  };
  return t;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config::Config() {
  for (const auto& [k, v] : default_table()) values_[k] = v;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  Config cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) + ": missing '='");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) + ": empty key");
    try {
      cfg.set(key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("unknown config key: " + key);
  it->second = value;
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("unknown config key: " + key);
  return it->second;
}

long long Config::get_int(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: " + v);
  }
  if (pos != v.size())
    throw std::invalid_argument("config key " + key + ": not an integer: " + v);
  return out;
}

std::uint64_t Config::get_uint(const std::string& key) const {
  const std::string& v = get(key);
  if (!v.empty() && v[0] == '-')
    throw std::invalid_argument("config key " + key + ": negative: " + v);
  std::size_t pos = 0;
  unsigned long long out;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: " + v);
  }
  if (pos != v.size())
    throw std::invalid_argument("config key " + key + ": not an integer: " + v);
  return out;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: " + v);
  }
  if (pos != v.size())
    throw std::invalid_argument("config key " + key + ": not a number: " + v);
  return out;
}

bool Config::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config key " + key + ": not a bool: " + v);
}

std::string Config::env_name() const { return get("env.name"); }

EnvParams Config::env_params() const {
  EnvParams p;
  long long n = get_int("env.chain_n");
  if (n < 2) throw std::invalid_argument("env.chain_n must be >= 2");
  p.chain_n = static_cast<std::size_t>(n);
  p.maze_seed = get_uint("env.maze_seed");
  p.goal_radius = get_double("env.goal_radius");
  p.step_scale = get_double("env.step_scale");
  p.dense_reward = get_bool("env.dense_reward");
  if (!(p.goal_radius > 0.0))
    throw std::invalid_argument("env.goal_radius must be positive");
  if (!(p.step_scale > 0.0))
    throw std::invalid_argument("env.step_scale must be positive");
  return p;
}

PPOConfig Config::ppo() const {
  PPOConfig c;
  c.clip = get_double("ppo.clip");
  c.gamma_e = get_double("ppo.gamma_e");
  c.gamma_i = get_double("ppo.gamma_i");
  c.lambda = get_double("ppo.lambda");
  c.beta = get_double("ppo.beta");
  long long epochs = get_int("ppo.epochs");
  long long minibatch = get_int("ppo.minibatch");
  if (epochs < 1) throw std::invalid_argument("ppo.epochs must be >= 1");
  if (minibatch < 1) throw std::invalid_argument("ppo.minibatch must be >= 1");
  c.epochs = static_cast<std::size_t>(epochs);
  c.minibatch = static_cast<std::size_t>(minibatch);
  c.entropy_coef = get_double("ppo.entropy");
  c.lr = get_double("ppo.lr");
  c.validate();
  return c;
}

NoveltyOptions Config::novelty() const {
  NoveltyOptions o;
  o.method = get("novelty.method");
  o.alpha = get_double("bigan.alpha");
  if (!(o.alpha >= 0.0 && o.alpha <= 1.0))
    throw std::invalid_argument("bigan.alpha must be in [0, 1]");
  long long dz = get_int("bigan.latent_dim");
  long long batch = get_int("novelty.batch");
  if (dz < 0) throw std::invalid_argument("bigan.latent_dim must be >= 0");
  if (batch < 1) throw std::invalid_argument("novelty.batch must be >= 1");
  o.latent_dim = static_cast<std::size_t>(dz);
  o.batch = static_cast<std::size_t>(batch);
  o.lr = get_double("novelty.lr");
  if (!(o.lr > 0.0)) throw std::invalid_argument("novelty.lr must be positive");
  return o;
}

NormalizeVariant Config::normalize_variant() const {
  const std::string& v = get("normalize.variant");
  if (v == "paper") return NormalizeVariant::kPaper;
  if (v == "shifted") return NormalizeVariant::kShifted;
  throw std::invalid_argument("normalize.variant must be paper or shifted: " + v);
}

void Config::validate() const {
  if (get_int("train.epochs") < 1)
    throw std::invalid_argument("train.epochs must be >= 1");
  if (get_int("train.episodes") < 1)
    throw std::invalid_argument("train.episodes must be >= 1");
  if (get_int("train.horizon") < 1)
    throw std::invalid_argument("train.horizon must be >= 1");
  get_uint("train.seed");
  if (get_int("memory.k") < 0)
    throw std::invalid_argument("memory.k must be >= 0");
  get_bool("memory.enabled");
  if (get_int("bigan.buffer_capacity") < 1)
    throw std::invalid_argument("bigan.buffer_capacity must be >= 1");
  if (get_int("bigan.steps_per_epoch") < 1)
    throw std::invalid_argument("bigan.steps_per_epoch must be >= 1");
  if (get_int("eval.samples") < 2)
    throw std::invalid_argument("eval.samples must be >= 2");
  if (get_int("eval.steps") < 1)
    throw std::invalid_argument("eval.steps must be >= 1");
  if (get_int("eval.seeds") < 1)
    throw std::invalid_argument("eval.seeds must be >= 1");
  const std::string& env = get("env.name");
  if (env != "sparse_chain" && env != "grid_maze" && env != "point_goal")
    throw std::invalid_argument("unknown env.name: " + env);
  const std::string& method = get("novelty.method");
  if (method != "bigan" && method != "rnd" && method != "vae" &&
      method != "lg_only" && method != "ld_only" && method != "none")
    throw std::invalid_argument("unknown novelty.method: " + method);
  normalize_variant();
  env_params();
  ppo();
  novelty();
}

std::string Config::text() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace adv

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace adv {

struct EnvSpec {
  std::size_t obs_dim = 0;
  bool discrete = true;
  std::size_t action_n = 0;  // discrete choice count, or continuous dims
  double action_low = -1.0;
  double action_high = 1.0;
  std::size_t horizon = 1;
};

struct Transition {
  std::vector<double> obs;
  double reward = 0.0;
  bool done = false;  // episode over (goal or horizon)
  bool goal = false;  // true terminal, not a horizon truncation
};

// Episodes end when the goal is hit or the step counter reaches the horizon.
// Snapshots capture the full simulator state including that counter;
// restore() is bit-exact replay, restore_as_start() additionally zeroes the
// episode clock so a remembered state can seed a fresh full-length episode.
class Env {
 public:
  virtual ~Env() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual const std::string& name() const = 0;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual Transition step(int action);
  virtual Transition step(const std::vector<double>& action);

  virtual std::vector<std::uint8_t> snapshot() const = 0;
  virtual std::vector<double> restore(const std::vector<std::uint8_t>& snap) = 0;
  virtual std::vector<double> restore_as_start(const std::vector<std::uint8_t>& snap) = 0;

  virtual std::vector<double> observe() const = 0;
  virtual bool done() const = 0;
  virtual std::size_t steps() const = 0;
};

struct EnvParams {
  std::size_t chain_n = 20;
  std::uint64_t maze_seed = 1;
  double goal_radius = 0.1;
  double step_scale = 0.1;
  bool dense_reward = false;
};

// name in {sparse_chain, grid_maze, point_goal}; throws on anything else.
std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params,
                              std::size_t horizon);

}  // namespace adv

#include <cmath>
#include <cstring>
#include <vector>

#include "adventurer/env.hpp"
#include "adventurer/rng.hpp"
#include "doctest.h"

using namespace adv;

namespace {

int random_action(Env& env, RandomStream& rng) {
  return rng.randint(static_cast<int>(env.spec().action_n));
}

std::vector<double> random_cont_action(Env& env, RandomStream& rng) {
  std::vector<double> a(env.spec().action_n);
  for (double& v : a) v = rng.uniform(env.spec().action_low, env.spec().action_high);
  return a;
}

Transition do_random_step(Env& env, RandomStream& rng) {
  if (env.spec().discrete) return env.step(random_action(env, rng));
  return env.step(random_cont_action(env, rng));
}

// Exact absorption probability for the chain under uniform random actions:
// right advances, left teleports to 0, goal at N-1 absorbs.
double chain_reach_prob(std::size_t n, std::size_t h) {
  std::vector<double> dist(n, 0.0);
  dist[0] = 1.0;
  double absorbed = 0.0;
  for (std::size_t step = 0; step < h; ++step) {
    std::vector<double> next(n, 0.0);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      if (dist[p] == 0.0) continue;
      next[0] += 0.5 * dist[p];
      if (p + 1 == n - 1)
        absorbed += 0.5 * dist[p];
      else
        next[p + 1] += 0.5 * dist[p];
    }
    dist = std::move(next);
  }
  return absorbed;
}

}  // namespace

TEST_CASE("sparse chain starts one-hot at position zero") {
  auto env = make_env("sparse_chain", {.chain_n = 10}, 40);
  auto obs = env->reset(123);
  REQUIRE(obs.size() == 10);
  CHECK(obs[0] == 1.0);
  for (std::size_t i = 1; i < 10; ++i) CHECK(obs[i] == 0.0);
}

TEST_CASE("sparse chain pays only on the final right step") {
  auto env = make_env("sparse_chain", {.chain_n = 10}, 40);
  env->reset(0);
  for (int k = 0; k < 8; ++k) {
    Transition tr = env->step(1);
    CHECK(tr.reward == 0.0);
    CHECK_FALSE(tr.done);
  }
  Transition last = env->step(1);
  CHECK(last.reward == 1.0);
  CHECK(last.done);
  CHECK(last.goal);
  CHECK(last.obs[9] == 1.0);
}

TEST_CASE("sparse chain left action teleports to zero") {
  auto env = make_env("sparse_chain", {.chain_n = 10}, 40);
  env->reset(0);
  env->step(1);
  env->step(1);
  Transition tr = env->step(0);
  CHECK(tr.reward == 0.0);
  CHECK(tr.obs[0] == 1.0);
}

TEST_CASE("environments reject bad actions and post-done steps") {
  auto chain = make_env("sparse_chain", {.chain_n = 4}, 8);
  chain->reset(0);
  CHECK_THROWS_AS(chain->step(2), std::invalid_argument);
  CHECK_THROWS_AS(chain->step({0.5, 0.5}), std::invalid_argument);
  chain->step(1);
  chain->step(1);
  Transition tr = chain->step(1);
  REQUIRE(tr.done);
  CHECK_THROWS_AS(chain->step(1), std::logic_error);

  auto pg = make_env("point_goal", {}, 8);
  pg->reset(1);
  CHECK_THROWS_AS(pg->step(0), std::invalid_argument);
  CHECK_THROWS_AS(pg->step({1.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(pg->step(std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("horizon bounds every episode") {
  EnvParams p;
  p.chain_n = 12;
  const std::size_t H = 15;
  for (const char* name : {"sparse_chain", "grid_maze", "point_goal"}) {
    auto env = make_env(name, p, H);
    RandomStream rng(derive_seed(5, "horizon", std::hash<std::string>{}(name)));
    for (int ep = 0; ep < 20; ++ep) {
      env->reset(static_cast<std::uint64_t>(ep));
      std::size_t count = 0;
      while (!env->done()) {
        do_random_step(*env, rng);
        ++count;
        REQUIRE(count <= H);
      }
      CHECK(count <= H);
    }
  }
}

TEST_CASE("seed and action sequence determine everything") {
  EnvParams p;
  p.chain_n = 8;
  for (const char* name : {"sparse_chain", "grid_maze", "point_goal"}) {
    auto a = make_env(name, p, 30);
    auto b = make_env(name, p, 30);
    RandomStream ra(99), rb(99);
    auto oa = a->reset(7);
    auto ob = b->reset(7);
    CHECK(std::memcmp(oa.data(), ob.data(), oa.size() * sizeof(double)) == 0);
    while (!a->done()) {
      Transition ta = do_random_step(*a, ra);
      Transition tb = do_random_step(*b, rb);
      REQUIRE(ta.obs.size() == tb.obs.size());
      CHECK(std::memcmp(ta.obs.data(), tb.obs.data(), ta.obs.size() * sizeof(double)) == 0);
      CHECK(ta.reward == tb.reward);
      CHECK(ta.done == tb.done);
    }
  }
}

TEST_CASE("snapshot restore replays the exact transition stream") {
  EnvParams p;
  p.chain_n = 10;
  for (const char* name : {"sparse_chain", "grid_maze", "point_goal"}) {
    auto env = make_env(name, p, 50);
    RandomStream rng(derive_seed(21, "snap", std::hash<std::string>{}(name)));
    env->reset(3);
    for (int k = 0; k < 5 && !env->done(); ++k) do_random_step(*env, rng);
    auto snap = env->snapshot();
    std::size_t t_at_snap = env->steps();

    std::vector<int> acts;
    std::vector<std::vector<double>> cacts;
    std::vector<Transition> first;
    for (int k = 0; k < 10 && !env->done(); ++k) {
      if (env->spec().discrete) {
        acts.push_back(random_action(*env, rng));
        first.push_back(env->step(acts.back()));
      } else {
        cacts.push_back(random_cont_action(*env, rng));
        first.push_back(env->step(cacts.back()));
      }
    }

    auto obs_back = env->restore(snap);
    CHECK(env->steps() == t_at_snap);
    for (std::size_t k = 0; k < first.size(); ++k) {
      Transition tr = env->spec().discrete ? env->step(acts[k]) : env->step(cacts[k]);
      CHECK(std::memcmp(tr.obs.data(), first[k].obs.data(),
                        tr.obs.size() * sizeof(double)) == 0);
      CHECK(tr.reward == first[k].reward);
      CHECK(tr.done == first[k].done);
    }
    (void)obs_back;
  }
}

TEST_CASE("restore_as_start grants a fresh horizon") {
  auto env = make_env("sparse_chain", {.chain_n = 20}, 10);
  env->reset(0);
  for (int k = 0; k < 9; ++k) env->step(1);
  auto snap = env->snapshot();
  CHECK(env->steps() == 9);
  env->restore_as_start(snap);
  CHECK(env->steps() == 0);
  CHECK_FALSE(env->done());
  std::size_t count = 0;
  while (!env->done()) {
    env->step(0);
    ++count;
  }
  CHECK(count == 10);
}

TEST_CASE("snapshots do not cross environments or parameters") {
  auto a = make_env("sparse_chain", {.chain_n = 10}, 40);
  auto b = make_env("sparse_chain", {.chain_n = 12}, 40);
  auto g = make_env("grid_maze", {}, 40);
  a->reset(0);
  b->reset(0);
  g->reset(0);
  auto snap = a->snapshot();
  CHECK_THROWS_AS(b->restore(snap), std::runtime_error);
  CHECK_THROWS_AS(g->restore(snap), std::runtime_error);
}

TEST_CASE("chain exploration hardness matches the exact absorption oracle") {
  // Exact DP pins the random-walk success probability; the union bound over
  // run windows gives the provable ceiling (N+2) * 2^-(N-1), and any single
  // all-right window gives the floor 2^-(N-1). Uniform random play on
  // SparseChain(20) succeeds with probability under 5e-5 inside H=2N.
  for (std::size_t n : {4u, 6u, 8u, 10u, 20u}) {
    double p = chain_reach_prob(n, 2 * n);
    double floor = std::pow(0.5, static_cast<double>(n - 1));
    double ceil = static_cast<double>(n + 2) * floor;
    CHECK(p >= floor);
    CHECK(p <= ceil);
  }
  CHECK(chain_reach_prob(20, 40) < 5e-5);

  // Monte Carlo through the real env agrees with the DP.
  const std::size_t n = 6, h = 12;
  const int episodes = 40000;
  auto env = make_env("sparse_chain", {.chain_n = n}, h);
  RandomStream rng(derive_seed(17, "chain-mc"));
  int hits = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    env->reset(static_cast<std::uint64_t>(ep));
    bool goal = false;
    while (!env->done()) {
      Transition tr = env->step(rng.randint(2));
      goal = goal || tr.goal;
    }
    if (goal) ++hits;
  }
  double mc = static_cast<double>(hits) / episodes;
  double dp = chain_reach_prob(n, h);
  double se = std::sqrt(dp * (1.0 - dp) / episodes);
  CHECK(std::fabs(mc - dp) < 5.0 * se);
}

TEST_CASE("grid maze layout and observation invariants") {
  auto env = make_env("grid_maze", {.maze_seed = 5}, 64);
  auto o1 = env->reset(9);
  auto o2 = env->reset(9);
  CHECK(o1 == o2);

  // One plane: 11 wall cells (column 6 minus the door) plus the agent.
  int ones = 0;
  for (double v : o1) {
    CHECK((v == 0.0 || v == 1.0));
    if (v == 1.0) ++ones;
  }
  CHECK(ones == 12);

  // Different maze seeds give different layouts somewhere.
  bool differ = false;
  for (std::uint64_t s = 6; s < 20 && !differ; ++s) {
    auto other = make_env("grid_maze", {.maze_seed = s}, 64);
    if (other->reset(9) != o1) differ = true;
  }
  CHECK(differ);
}

TEST_CASE("grid maze goal is reachable and pays once") {
  auto env = make_env("grid_maze", {.maze_seed = 1}, 500);
  env->reset(4);
  // A long random walk must eventually cross the door and hit the goal.
  RandomStream rng(derive_seed(2, "maze-walk"));
  bool reached = false;
  for (int ep = 0; ep < 200 && !reached; ++ep) {
    env->reset(static_cast<std::uint64_t>(ep));
    while (!env->done()) {
      Transition tr = env->step(rng.randint(4));
      if (tr.goal) {
        CHECK(tr.reward == 1.0);
        CHECK(tr.done);
        reached = true;
      } else {
        CHECK(tr.reward == 0.0);
      }
    }
  }
  CHECK(reached);
}

TEST_CASE("point goal geometry follows the step rule") {
  auto env = make_env("point_goal", {.goal_radius = 0.1, .step_scale = 0.1}, 100);
  auto obs = env->reset(11);
  REQUIRE(obs.size() == 4);
  double dx = obs[2], dy = obs[3];
  double d0 = std::hypot(dx, dy);
  REQUIRE(d0 > 0.1);

  // Unit action straight at the goal shortens the distance by exactly the
  // step scale while far from walls and goal.
  std::vector<double> a{dx / d0, dy / d0};
  bool interior = std::fabs(obs[0]) < 0.85 && std::fabs(obs[1]) < 0.85;
  Transition tr = env->step(a);
  double d1 = std::hypot(tr.obs[2], tr.obs[3]);
  if (interior) CHECK(d1 == doctest::Approx(d0 - 0.1).epsilon(1e-9));

  // Keep walking straight at the goal; it must trigger the radius reward.
  int guard = 0;
  while (!tr.goal) {
    REQUIRE(++guard < 50);
    double g = std::hypot(tr.obs[2], tr.obs[3]);
    if (g == 0.0) break;
    tr = env->step({tr.obs[2] / g, tr.obs[3] / g});
  }
  CHECK(tr.goal);
  CHECK(tr.reward == 1.0);
  CHECK(tr.done);
}

TEST_CASE("point goal dense variant pays negative distance") {
  EnvParams p;
  p.dense_reward = true;
  auto env = make_env("point_goal", p, 10);
  auto obs = env->reset(3);
  (void)obs;
  Transition tr = env->step({0.0, 0.0});
  double d = std::hypot(tr.obs[2], tr.obs[3]);
  CHECK(tr.reward == doctest::Approx(-d).epsilon(1e-12));
}

TEST_CASE("unknown environment name is rejected") {
  CHECK_THROWS_AS(make_env("atari", {}, 10), std::invalid_argument);
}

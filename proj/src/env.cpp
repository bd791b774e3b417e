#include "adventurer/env.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "adventurer/rng.hpp"

namespace adv {

Transition Env::step(int) {
  throw std::invalid_argument(name() + ": discrete action on this env");
}

Transition Env::step(const std::vector<double>&) {
  throw std::invalid_argument(name() + ": continuous action on this env");
}

namespace {

// Snapshot layout: u8 tag length, tag bytes, then env fields as u64/f64 LE.
// The tag covers env name and construction parameters, so a snapshot from a
// differently configured env is rejected.
class ByteWriter {
 public:
  void tag(const std::string& s) {
    if (s.size() > 255) throw std::logic_error("snapshot tag too long");
    buf_.push_back(static_cast<std::uint8_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& b) : buf_(b) {}
  void expect_tag(const std::string& s) {
    if (pos_ >= buf_.size()) fail();
    std::size_t len = buf_[pos_++];
    if (len != s.size() || pos_ + len > buf_.size()) fail();
    if (std::memcmp(buf_.data() + pos_, s.data(), len) != 0) fail();
    pos_ += len;
  }
  std::uint64_t u64() {
    if (pos_ + 8 > buf_.size()) fail();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  void done() {
    if (pos_ != buf_.size()) fail();
  }

 private:
  [[noreturn]] void fail() {
    throw std::runtime_error("snapshot does not match this environment");
  }
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

// Cells 0..N-1, start at 0, goal at N-1. "right" advances one cell, "left"
// teleports back to 0. Reward 1 only on entering the goal.
class SparseChain final : public Env {
 public:
  SparseChain(std::size_t n, std::size_t horizon) : n_(n) {
    if (n_ < 2) throw std::invalid_argument("sparse_chain: need N >= 2");
    if (horizon < 1) throw std::invalid_argument("sparse_chain: need H >= 1");
    spec_.obs_dim = n_;
    spec_.discrete = true;
    spec_.action_n = 2;
    spec_.horizon = horizon;
    tag_ = "sparse_chain/" + std::to_string(n_);
  }

  const EnvSpec& spec() const override { return spec_; }
  const std::string& name() const override { return tag_; }

  std::vector<double> reset(std::uint64_t) override {
    pos_ = 0;
    t_ = 0;
    done_ = false;
    return observe();
  }

  using Env::step;
  Transition step(int action) override {
    if (done_) throw std::logic_error("sparse_chain: step after done");
    if (action < 0 || action > 1)
      throw std::invalid_argument("sparse_chain: action must be 0 or 1");
    pos_ = (action == 1) ? std::min(pos_ + 1, n_ - 1) : 0;
    ++t_;
    Transition tr;
    tr.goal = (pos_ == n_ - 1);
    tr.reward = tr.goal ? 1.0 : 0.0;
    done_ = tr.goal || t_ >= spec_.horizon;
    tr.done = done_;
    tr.obs = observe();
    return tr;
  }

  std::vector<std::uint8_t> snapshot() const override {
    ByteWriter w;
    w.tag(tag_);
    w.u64(pos_);
    w.u64(t_);
    w.u64(done_ ? 1 : 0);
    return w.take();
  }

  std::vector<double> restore(const std::vector<std::uint8_t>& snap) override {
    ByteReader r(snap);
    r.expect_tag(tag_);
    pos_ = static_cast<std::size_t>(r.u64());
    t_ = static_cast<std::size_t>(r.u64());
    done_ = r.u64() != 0;
    r.done();
    if (pos_ >= n_) throw std::runtime_error("snapshot: position out of range");
    return observe();
  }

  std::vector<double> restore_as_start(const std::vector<std::uint8_t>& snap) override {
    restore(snap);
    t_ = 0;
    done_ = false;
    return observe();
  }

  std::vector<double> observe() const override {
    std::vector<double> o(n_, 0.0);
    o[pos_] = 1.0;
    return o;
  }
  bool done() const override { return done_; }
  std::size_t steps() const override { return t_; }

 private:
  std::size_t n_;
  EnvSpec spec_;
  std::string tag_;
  std::size_t pos_ = 0, t_ = 0;
  bool done_ = false;
};

// 12x12 grid split by a wall down column 6 with a single door cell. Room one
// is columns 0..5, room two is columns 7..11; the goal sits in room two.
// Observation is one 144-bit plane: wall cells and the agent cell are 1.
class GridMaze final : public Env {
 public:
  static constexpr std::size_t kSide = 12;
  static constexpr std::size_t kWallCol = 6;

  GridMaze(std::uint64_t maze_seed, std::size_t horizon) : maze_seed_(maze_seed) {
    if (horizon < 1) throw std::invalid_argument("grid_maze: need H >= 1");
    spec_.obs_dim = kSide * kSide;
    spec_.discrete = true;
    spec_.action_n = 4;
    spec_.horizon = horizon;
    RandomStream layout(derive_seed(maze_seed_, "maze-layout"));
    door_row_ = static_cast<std::size_t>(layout.randint(kSide));
    goal_row_ = static_cast<std::size_t>(layout.randint(kSide));
    goal_col_ = kWallCol + 1 +
                static_cast<std::size_t>(layout.randint(kSide - kWallCol - 1));
    tag_ = "grid_maze/" + std::to_string(maze_seed_);
  }

  const EnvSpec& spec() const override { return spec_; }
  const std::string& name() const override { return tag_; }

  bool wall(std::size_t r, std::size_t c) const {
    return c == kWallCol && r != door_row_;
  }
  std::size_t door_row() const { return door_row_; }
  std::size_t goal_row() const { return goal_row_; }
  std::size_t goal_col() const { return goal_col_; }

  std::vector<double> reset(std::uint64_t seed) override {
    RandomStream rs(derive_seed(maze_seed_, "maze-reset", seed));
    row_ = static_cast<std::size_t>(rs.randint(kSide));
    col_ = static_cast<std::size_t>(rs.randint(kWallCol));
    t_ = 0;
    done_ = false;
    return observe();
  }

  using Env::step;
  Transition step(int action) override {
    if (done_) throw std::logic_error("grid_maze: step after done");
    if (action < 0 || action > 3)
      throw std::invalid_argument("grid_maze: action must be in 0..3");
    long nr = static_cast<long>(row_), nc = static_cast<long>(col_);
    switch (action) {
      case 0: --nr; break;
      case 1: ++nr; break;
      case 2: --nc; break;
      case 3: ++nc; break;
    }
    bool inside = nr >= 0 && nr < static_cast<long>(kSide) && nc >= 0 &&
                  nc < static_cast<long>(kSide);
    if (inside && !wall(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc))) {
      row_ = static_cast<std::size_t>(nr);
      col_ = static_cast<std::size_t>(nc);
    }
    ++t_;
    Transition tr;
    tr.goal = (row_ == goal_row_ && col_ == goal_col_);
    tr.reward = tr.goal ? 1.0 : 0.0;
    done_ = tr.goal || t_ >= spec_.horizon;
    tr.done = done_;
    tr.obs = observe();
    return tr;
  }

  std::vector<std::uint8_t> snapshot() const override {
    ByteWriter w;
    w.tag(tag_);
    w.u64(row_);
    w.u64(col_);
    w.u64(t_);
    w.u64(done_ ? 1 : 0);
    return w.take();
  }

  std::vector<double> restore(const std::vector<std::uint8_t>& snap) override {
    ByteReader r(snap);
    r.expect_tag(tag_);
    row_ = static_cast<std::size_t>(r.u64());
    col_ = static_cast<std::size_t>(r.u64());
    t_ = static_cast<std::size_t>(r.u64());
    done_ = r.u64() != 0;
    r.done();
    if (row_ >= kSide || col_ >= kSide || wall(row_, col_))
      throw std::runtime_error("snapshot: agent cell invalid");
    return observe();
  }

  std::vector<double> restore_as_start(const std::vector<std::uint8_t>& snap) override {
    restore(snap);
    t_ = 0;
    done_ = false;
    return observe();
  }

  std::vector<double> observe() const override {
    std::vector<double> o(kSide * kSide, 0.0);
    for (std::size_t r = 0; r < kSide; ++r)
      for (std::size_t c = 0; c < kSide; ++c)
        if (wall(r, c)) o[r * kSide + c] = 1.0;
    o[row_ * kSide + col_] = 1.0;
    return o;
  }
  bool done() const override { return done_; }
  std::size_t steps() const override { return t_; }

 private:
  std::uint64_t maze_seed_;
  EnvSpec spec_;
  std::string tag_;
  std::size_t door_row_ = 0, goal_row_ = 0, goal_col_ = 0;
  std::size_t row_ = 0, col_ = 0, t_ = 0;
  bool done_ = false;
};

// Position and goal in [-1,1]^2; p' = clamp(p + step_scale * a). Sparse
// reward 1 inside the goal radius (terminal); the dense variant pays
// -distance every step instead, same terminal condition.
class PointGoal final : public Env {
 public:
  PointGoal(double radius, double step_scale, bool dense, std::size_t horizon)
      : radius_(radius), lambda_(step_scale), dense_(dense) {
    if (horizon < 1) throw std::invalid_argument("point_goal: need H >= 1");
    if (radius_ <= 0.0 || lambda_ <= 0.0)
      throw std::invalid_argument("point_goal: radius and step scale must be positive");
    spec_.obs_dim = 4;
    spec_.discrete = false;
    spec_.action_n = 2;
    spec_.action_low = -1.0;
    spec_.action_high = 1.0;
    spec_.horizon = horizon;
    tag_ = "point_goal";
  }

  const EnvSpec& spec() const override { return spec_; }
  const std::string& name() const override { return tag_; }

  std::vector<double> reset(std::uint64_t seed) override {
    RandomStream rs(derive_seed(seed, "point-reset"));
    do {
      px_ = rs.uniform(-1.0, 1.0);
      py_ = rs.uniform(-1.0, 1.0);
      gx_ = rs.uniform(-1.0, 1.0);
      gy_ = rs.uniform(-1.0, 1.0);
    } while (dist() <= radius_);
    t_ = 0;
    done_ = false;
    return observe();
  }

  using Env::step;
  Transition step(const std::vector<double>& action) override {
    if (done_) throw std::logic_error("point_goal: step after done");
    if (action.size() != 2)
      throw std::invalid_argument("point_goal: action must have 2 dims");
    for (double a : action)
      if (!(a >= spec_.action_low - 1e-12 && a <= spec_.action_high + 1e-12))
        throw std::invalid_argument("point_goal: action out of bounds");
    px_ = std::clamp(px_ + lambda_ * action[0], -1.0, 1.0);
    py_ = std::clamp(py_ + lambda_ * action[1], -1.0, 1.0);
    ++t_;
    Transition tr;
    double d = dist();
    tr.goal = d <= radius_;
    tr.reward = dense_ ? -d : (tr.goal ? 1.0 : 0.0);
    done_ = tr.goal || t_ >= spec_.horizon;
    tr.done = done_;
    tr.obs = observe();
    return tr;
  }

  std::vector<std::uint8_t> snapshot() const override {
    ByteWriter w;
    w.tag(tag_);
    w.f64(px_);
    w.f64(py_);
    w.f64(gx_);
    w.f64(gy_);
    w.u64(t_);
    w.u64(done_ ? 1 : 0);
    return w.take();
  }

  std::vector<double> restore(const std::vector<std::uint8_t>& snap) override {
    ByteReader r(snap);
    r.expect_tag(tag_);
    px_ = r.f64();
    py_ = r.f64();
    gx_ = r.f64();
    gy_ = r.f64();
    t_ = static_cast<std::size_t>(r.u64());
    done_ = r.u64() != 0;
    r.done();
    return observe();
  }

  std::vector<double> restore_as_start(const std::vector<std::uint8_t>& snap) override {
    restore(snap);
    t_ = 0;
    done_ = false;
    return observe();
  }

  std::vector<double> observe() const override {
    return {px_, py_, gx_ - px_, gy_ - py_};
  }
  bool done() const override { return done_; }
  std::size_t steps() const override { return t_; }

 private:
  double dist() const { return std::hypot(gx_ - px_, gy_ - py_); }

  double radius_, lambda_;
  bool dense_;
  EnvSpec spec_;
  std::string tag_;
  double px_ = 0, py_ = 0, gx_ = 0, gy_ = 0;
  std::size_t t_ = 0;
  bool done_ = false;
};

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params,
                              std::size_t horizon) {
  if (name == "sparse_chain")
    return std::make_unique<SparseChain>(params.chain_n, horizon);
  if (name == "grid_maze")
    return std::make_unique<GridMaze>(params.maze_seed, horizon);
  if (name == "point_goal")
    return std::make_unique<PointGoal>(params.goal_radius, params.step_scale,
                                       params.dense_reward, horizon);
  throw std::invalid_argument("unknown environment: " + name);
}

}  // namespace adv

#include "adventurer/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "adventurer/kernels.hpp"

namespace adv {

Mlp::Mlp(std::string prefix, std::vector<std::size_t> widths, Act act,
         double leaky_slope)
    : prefix_(std::move(prefix)),
      widths_(std::move(widths)),
      act_(act),
      leaky_slope_(leaky_slope) {
  if (widths_.size() < 2)
    throw std::invalid_argument("mlp: need at least input and output widths");
  for (std::size_t w : widths_)
    if (w == 0) throw std::invalid_argument("mlp: zero width");
}

std::string Mlp::weight_name(std::size_t layer) const {
  return prefix_ + "w" + std::to_string(layer);
}

std::string Mlp::bias_name(std::size_t layer) const {
  return prefix_ + "b" + std::to_string(layer);
}

void Mlp::init(ParamSet& ps, RandomStream& rng) const {
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    std::size_t fan_in = widths_[l], fan_out = widths_[l + 1];
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor w = Tensor::zeros({fan_out, fan_in});
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    ps.add(weight_name(l), std::move(w));
    ps.add(bias_name(l), Tensor::zeros({fan_out}));
  }
}

NodeId Mlp::forward(Tape& tape, ParamSet& ps, NodeId x) const {
  NodeId h = x;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    NodeId w = tape.param(ps, weight_name(l));
    NodeId b = tape.param(ps, bias_name(l));
    h = tape.affine(h, w, b);
    bool last = (l + 2 == widths_.size());
    if (!last) {
      switch (act_) {
        case Act::kTanh: h = tape.tanh_(h); break;
        case Act::kRelu: h = tape.relu(h); break;
        case Act::kLeakyRelu: h = tape.leaky_relu(h, leaky_slope_); break;
      }
    }
  }
  return h;
}

std::vector<double> Mlp::eval(const ParamSet& ps, const std::vector<double>& x,
                              std::size_t batch,
                              std::vector<std::vector<double>>* hiddens) const {
  if (x.size() != batch * widths_.front())
    throw std::invalid_argument("mlp eval: input size mismatch");
  if (hiddens) hiddens->clear();
  std::vector<double> cur = x;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    std::size_t I = widths_[l], O = widths_[l + 1];
    const Tensor& w = ps.at(weight_name(l));
    const Tensor& b = ps.at(bias_name(l));
    std::vector<double> next(batch * O);
    affine_forward(cur.data(), w.data.data(), b.data.data(), next.data(),
                   batch, I, O);
    bool last = (l + 2 == widths_.size());
    if (!last) {
      switch (act_) {
        case Act::kTanh:
          for (double& v : next) v = std::tanh(v);
          break;
        case Act::kRelu:
          for (double& v : next) v = v > 0.0 ? v : 0.0;
          break;
        case Act::kLeakyRelu:
          for (double& v : next) v = v > 0.0 ? v : leaky_slope_ * v;
          break;
      }
      if (hiddens) hiddens->push_back(next);
    }
    cur = std::move(next);
  }
  return cur;
}

void AdamState::step(ParamSet& ps) {
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (auto& [name, p] : ps) {
    if (p.grad.size() != p.data.size())
      throw std::runtime_error("adam: missing grad buffer for " + name);
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.empty()) m.assign(p.data.size(), 0.0);
    if (v.empty()) v.assign(p.data.size(), 0.0);
    if (m.size() != p.data.size())
      throw std::runtime_error("adam: stale moment buffer for " + name);
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      double g = p.grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      double mh = m[i] / bc1;
      double vh = v[i] / bc2;
      p.data[i] -= cfg_.lr * mh / (std::sqrt(vh) + cfg_.eps);
    }
    check_finite(p.data, "adam-updated parameter");
  }
  ps.bump_version();
}

FiniteDiffReport finite_diff_check(ParamSet& ps,
                                   const std::function<double()>& loss_fn,
                                   double h, std::size_t max_per_param) {
  ps.zero_grads();
  loss_fn();
  std::map<std::string, std::vector<double>> analytic;
  for (auto& [name, p] : ps) analytic[name] = p.grad;

  FiniteDiffReport rep;
  for (auto& [name, p] : ps) {
    std::size_t n = p.data.size();
    std::size_t stride = 1;
    if (max_per_param > 0 && n > max_per_param) stride = n / max_per_param;
    for (std::size_t i = 0; i < n; i += stride) {
      double save = p.data[i];
      p.data[i] = save + h;
      ps.zero_grads();
      double lp = loss_fn();
      p.data[i] = save - h;
      ps.zero_grads();
      double lm = loss_fn();
      p.data[i] = save;
      double d = (lp - lm) / (2.0 * h);
      double g = analytic[name][i];
      double denom = 1.0;
      if (std::fabs(g) > denom) denom = std::fabs(g);
      if (std::fabs(d) > denom) denom = std::fabs(d);
      double err = std::fabs(g - d) / denom;
      ++rep.checked;
      if (err > rep.max_rel_err) {
        rep.max_rel_err = err;
        rep.worst_param = name;
        rep.worst_index = i;
      }
    }
  }
  ps.zero_grads();
  return rep;
}

}  // namespace adv

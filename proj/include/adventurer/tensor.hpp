#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace adv {

// Dense row-major f64 tensor. `grad` is either empty (untracked) or the same
// length as `data`.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  std::vector<double> grad;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != shape_numel(shape))
      throw std::invalid_argument("tensor: data length does not match shape");
  }

  static std::size_t shape_numel(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t e : s) {
      if (e == 0) throw std::invalid_argument("tensor: zero extent");
      n *= e;
    }
    return n;
  }

  static Tensor zeros(std::vector<std::size_t> s) {
    std::size_t n = shape_numel(s);
    return Tensor(std::move(s), std::vector<double>(n, 0.0));
  }
  static Tensor full(std::vector<std::size_t> s, double v) {
    std::size_t n = shape_numel(s);
    return Tensor(std::move(s), std::vector<double>(n, v));
  }
  static Tensor scalar(double v) { return Tensor({1}, {v}); }
  static Tensor row(std::vector<double> d) {
    std::vector<std::size_t> s{1, d.size()};
    return Tensor(std::move(s), std::move(d));
  }
  static Tensor vec(std::vector<double> d) {
    std::vector<std::size_t> s{d.size()};
    return Tensor(std::move(s), std::move(d));
  }

  std::size_t numel() const { return data.size(); }
  bool tracked() const { return !grad.empty(); }
  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  }
  void zero_grad() { grad.assign(grad.size(), 0.0); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

void check_finite(const std::vector<double>& v, const char* what);
inline void check_finite(const Tensor& t, const char* what) {
  check_finite(t.data, what);
}

// Named parameter map with deterministic (sorted) iteration order. Every
// entry keeps a grad buffer; `version` counts optimizer steps applied.
class ParamSet {
 public:
  Tensor& add(const std::string& name, Tensor t) {
    if (params_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
    t.ensure_grad();
    return params_.emplace(name, std::move(t)).first->second;
  }

  Tensor& at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw std::out_of_range("no parameter: " + name);
    return it->second;
  }
  const Tensor& at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw std::out_of_range("no parameter: " + name);
    return it->second;
  }
  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::size_t size() const { return params_.size(); }

  void zero_grads() {
    for (auto& [name, t] : params_) t.zero_grad();
  }

  std::uint64_t version() const { return version_; }
  void bump_version() { ++version_; }

  // FNV-1a over the bit patterns of all values, in name order. Used by tests
  // to certify that scoring paths do not mutate parameters.
  std::uint64_t checksum() const;

  std::size_t total_scalars() const {
    std::size_t n = 0;
    for (const auto& [name, t] : params_) n += t.numel();
    return n;
  }

 private:
  std::map<std::string, Tensor> params_;
  std::uint64_t version_ = 0;
};

}  // namespace adv

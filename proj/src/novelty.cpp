#include "adventurer/novelty.hpp"

#include <cmath>
#include <stdexcept>

namespace adv {

StateBuffer::StateBuffer(std::size_t capacity, std::size_t obs_dim)
    : capacity_(capacity), obs_dim_(obs_dim) {
  if (capacity_ == 0) throw std::invalid_argument("state buffer: zero capacity");
  if (obs_dim_ == 0) throw std::invalid_argument("state buffer: zero obs dim");
}

void StateBuffer::push(const std::vector<double>& obs) {
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("state buffer: obs dim mismatch");
  if (size_ < capacity_) {
    data_.insert(data_.end(), obs.begin(), obs.end());
    ++size_;
  } else {
    std::copy(obs.begin(), obs.end(),
              data_.begin() + static_cast<long>(head_ * obs_dim_));
    head_ = (head_ + 1) % capacity_;
  }
}

std::vector<double> StateBuffer::row(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("state buffer: row out of range");
  return {data_.begin() + static_cast<long>(i * obs_dim_),
          data_.begin() + static_cast<long>((i + 1) * obs_dim_)};
}

std::vector<double> StateBuffer::sample(std::size_t batch,
                                        RandomStream& rng) const {
  if (size_ == 0) throw std::runtime_error("state buffer: sampling while empty");
  std::vector<double> out(batch * obs_dim_);
  for (std::size_t b = 0; b < batch; ++b) {
    std::size_t i = static_cast<std::size_t>(rng.randint(static_cast<int>(size_)));
    std::copy_n(data_.begin() + static_cast<long>(i * obs_dim_), obs_dim_,
                out.begin() + static_cast<long>(b * obs_dim_));
  }
  return out;
}

std::size_t auto_latent_dim(std::size_t obs_dim) {
  return obs_dim >= 100 ? 32 : 8;
}

namespace {

std::uint64_t mix_checksums(std::uint64_t a, std::uint64_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

std::vector<double> concat_rows(const std::vector<double>& x, std::size_t xd,
                                const std::vector<double>& z, std::size_t zd,
                                std::size_t batch) {
  std::vector<double> out(batch * (xd + zd));
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(x.begin() + static_cast<long>(b * xd), xd,
                out.begin() + static_cast<long>(b * (xd + zd)));
    std::copy_n(z.begin() + static_cast<long>(b * zd), zd,
                out.begin() + static_cast<long>(b * (xd + zd) + xd));
  }
  return out;
}

}  // namespace

Bigan::Bigan(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed,
             std::string method_name)
    : method_(std::move(method_name)),
      obs_dim_(obs_dim),
      d_z_(opt.latent_dim ? opt.latent_dim : auto_latent_dim(obs_dim)),
      batch_(opt.batch),
      alpha_(opt.alpha),
      gen_("bigan_g/", {d_z_, 64, 128, obs_dim_}, Act::kTanh),
      enc_("bigan_e/", {obs_dim_, 128, 64, d_z_}, Act::kTanh),
      disc_("bigan_d/", {obs_dim_ + d_z_, 128, 64, 1}, Act::kLeakyRelu),
      adam_ge_(AdamConfig{opt.lr, 0.9, 0.999, 1e-8}),
      adam_d_(AdamConfig{opt.lr, 0.9, 0.999, 1e-8}),
      stream_(derive_seed(seed, "bigan-stream")) {
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0))
    throw std::invalid_argument("bigan: alpha must be in [0,1]");
  if (batch_ < 1) throw std::invalid_argument("bigan: batch must be >= 1");
  if (!(opt.lr > 0.0)) throw std::invalid_argument("bigan: lr must be positive");
  RandomStream init(derive_seed(seed, "bigan-init"));
  gen_.init(ps_ge_, init);
  enc_.init(ps_ge_, init);
  disc_.init(ps_d_, init);
}

NodeId Bigan::discriminator(Tape& tape, NodeId x, NodeId z) {
  return disc_.forward(tape, ps_d_, tape.concat_cols(x, z));
}

std::vector<double> Bigan::f_d(const std::vector<double>& x,
                               const std::vector<double>& z,
                               std::size_t batch) const {
  std::vector<std::vector<double>> hiddens;
  disc_.eval(ps_d_, concat_rows(x, obs_dim_, z, d_z_, batch), batch, &hiddens);
  return hiddens[1];  // penultimate layer, width 64
}

NodeId Bigan::build_d_loss(Tape& tape, const std::vector<double>& s,
                           const std::vector<double>& z, std::size_t batch) {
  std::vector<double> z_hat = enc_.eval(ps_ge_, s, batch);
  std::vector<double> x_fake = gen_.eval(ps_ge_, z, batch);
  NodeId l_real = discriminator(tape, tape.constant(Tensor({batch, obs_dim_}, s)),
                                tape.constant(Tensor({batch, d_z_}, z_hat)));
  NodeId l_fake =
      discriminator(tape, tape.constant(Tensor({batch, obs_dim_}, x_fake)),
                    tape.constant(Tensor({batch, d_z_}, z)));
  return tape.add(tape.mean(tape.softplus(tape.scale(l_real, -1.0))),
                  tape.mean(tape.softplus(l_fake)));
}

NodeId Bigan::build_ge_loss(Tape& tape, const std::vector<double>& s,
                            const std::vector<double>& z, std::size_t batch) {
  NodeId s_node = tape.constant(Tensor({batch, obs_dim_}, s));
  NodeId z_node = tape.constant(Tensor({batch, d_z_}, z));
  NodeId z_hat_node = enc_.forward(tape, ps_ge_, s_node);
  NodeId x_fake_node = gen_.forward(tape, ps_ge_, z_node);
  NodeId l_fake = discriminator(tape, x_fake_node, z_node);
  NodeId l_real = discriminator(tape, s_node, z_hat_node);
  return tape.add(tape.mean(tape.softplus(tape.scale(l_fake, -1.0))),
                  tape.mean(tape.softplus(l_real)));
}

std::pair<double, double> Bigan::train_step(const StateBuffer& buffer) {
  if (buffer.size() == 0)
    throw std::runtime_error("bigan: training on an empty buffer");

  // Discriminator ascent. The encoder and generator outputs enter as
  // constants, so only D sees gradients.
  std::vector<double> s = buffer.sample(batch_, stream_);
  std::vector<double> z(batch_ * d_z_);
  stream_.fill_normal(z);
  std::vector<double> z_hat = enc_.eval(ps_ge_, s, batch_);
  std::vector<double> x_fake = gen_.eval(ps_ge_, z, batch_);

  double d_loss_val;
  {
    Tape tape;
    NodeId l_real = discriminator(tape, tape.constant(Tensor({batch_, obs_dim_}, s)),
                                  tape.constant(Tensor({batch_, d_z_}, z_hat)));
    NodeId l_fake =
        discriminator(tape, tape.constant(Tensor({batch_, obs_dim_}, x_fake)),
                      tape.constant(Tensor({batch_, d_z_}, z)));
    NodeId d_loss = tape.add(tape.mean(tape.softplus(tape.scale(l_real, -1.0))),
                             tape.mean(tape.softplus(l_fake)));
    d_loss_val = tape.scalar(d_loss);
    tape.backward(d_loss);
    adam_d_.step(ps_d_);
    ps_d_.zero_grads();
  }

  // Generator/encoder descent in the non-saturating label-swapped form;
  // D participates in the graph but only G,E parameters step.
  std::vector<double> s2 = buffer.sample(batch_, stream_);
  std::vector<double> z2(batch_ * d_z_);
  stream_.fill_normal(z2);

  double ge_loss_val;
  {
    Tape tape;
    NodeId s_node = tape.constant(Tensor({batch_, obs_dim_}, s2));
    NodeId z_node = tape.constant(Tensor({batch_, d_z_}, z2));
    NodeId z_hat_node = enc_.forward(tape, ps_ge_, s_node);
    NodeId x_fake_node = gen_.forward(tape, ps_ge_, z_node);
    NodeId l_fake = discriminator(tape, x_fake_node, z_node);
    NodeId l_real = discriminator(tape, s_node, z_hat_node);
    NodeId ge_loss = tape.add(tape.mean(tape.softplus(tape.scale(l_fake, -1.0))),
                              tape.mean(tape.softplus(l_real)));
    ge_loss_val = tape.scalar(ge_loss);
    tape.backward(ge_loss);
    adam_ge_.step(ps_ge_);
    ps_ge_.zero_grads();
    ps_d_.zero_grads();
  }

  return {d_loss_val, ge_loss_val};
}

std::vector<FitRecord> Bigan::fit(const StateBuffer& buffer, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("bigan: fit needs steps >= 1");
  std::vector<FitRecord> hist;
  hist.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    auto [d, ge] = train_step(buffer);
    hist.push_back({d, ge});
  }
  return hist;
}

std::pair<double, double> Bigan::score_components(
    const std::vector<double>& obs) const {
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("bigan: score obs dim mismatch");
  std::vector<double> z_hat = enc_.eval(ps_ge_, obs, 1);
  std::vector<double> recon = gen_.eval(ps_ge_, z_hat, 1);
  double l_g = mean_abs_diff(obs, recon);
  std::vector<double> f1 = f_d(obs, z_hat, 1);
  std::vector<double> f2 = f_d(recon, z_hat, 1);
  double l_d = mean_abs_diff(f1, f2);
  if (!std::isfinite(l_g) || !std::isfinite(l_d))
    throw std::runtime_error("bigan: non-finite novelty score");
  return {l_g, l_d};
}

double Bigan::score(const std::vector<double>& obs) const {
  auto [l_g, l_d] = score_components(obs);
  return alpha_ * l_g + (1.0 - alpha_) * l_d;
}

std::uint64_t Bigan::checksum() const {
  return mix_checksums(ps_ge_.checksum(), ps_d_.checksum());
}

Rnd::Rnd(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed)
    : obs_dim_(obs_dim),
      batch_(opt.batch),
      target_("rnd_t/", {obs_dim_, 64, 64}, Act::kTanh),
      pred_("rnd_p/", {obs_dim_, 64, 64}, Act::kTanh),
      adam_(AdamConfig{opt.lr, 0.9, 0.999, 1e-8}),
      stream_(derive_seed(seed, "rnd-stream")) {
  if (batch_ < 1) throw std::invalid_argument("rnd: batch must be >= 1");
  if (!(opt.lr > 0.0)) throw std::invalid_argument("rnd: lr must be positive");
  RandomStream t_init(derive_seed(seed, "rnd-target"));
  RandomStream p_init(derive_seed(seed, "rnd-pred"));
  target_.init(ps_target_, t_init);
  pred_.init(ps_pred_, p_init);
}

std::vector<FitRecord> Rnd::fit(const StateBuffer& buffer, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("rnd: fit needs steps >= 1");
  if (buffer.size() == 0)
    throw std::runtime_error("rnd: training on an empty buffer");
  std::vector<FitRecord> hist;
  hist.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<double> s = buffer.sample(batch_, stream_);
    std::vector<double> t_out = target_.eval(ps_target_, s, batch_);
    Tape tape;
    NodeId p = pred_.forward(tape, ps_pred_,
                             tape.constant(Tensor({batch_, obs_dim_}, s)));
    NodeId loss =
        tape.mean_sq(tape.sub(p, tape.constant(Tensor({batch_, 64}, t_out))));
    double v = tape.scalar(loss);
    tape.backward(loss);
    adam_.step(ps_pred_);
    ps_pred_.zero_grads();
    hist.push_back({v, 0.0});
  }
  return hist;
}

double Rnd::score(const std::vector<double>& obs) const {
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("rnd: score obs dim mismatch");
  std::vector<double> t = target_.eval(ps_target_, obs, 1);
  std::vector<double> p = pred_.eval(ps_pred_, obs, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += (t[i] - p[i]) * (t[i] - p[i]);
  double v = acc / static_cast<double>(t.size());
  if (!std::isfinite(v)) throw std::runtime_error("rnd: non-finite score");
  return v;
}

std::uint64_t Rnd::checksum() const {
  return mix_checksums(ps_target_.checksum(), ps_pred_.checksum());
}

Vae::Vae(std::size_t obs_dim, const NoveltyOptions& opt, std::uint64_t seed)
    : obs_dim_(obs_dim),
      d_z_(opt.latent_dim ? opt.latent_dim : auto_latent_dim(obs_dim)),
      batch_(opt.batch),
      enc_mu_("vae_mu/", {obs_dim_, 64, d_z_}, Act::kTanh),
      enc_lv_("vae_lv/", {obs_dim_, 64, d_z_}, Act::kTanh),
      dec_("vae_dec/", {d_z_, 64, obs_dim_}, Act::kTanh),
      adam_(AdamConfig{opt.lr, 0.9, 0.999, 1e-8}),
      stream_(derive_seed(seed, "vae-stream")) {
  if (batch_ < 1) throw std::invalid_argument("vae: batch must be >= 1");
  if (!(opt.lr > 0.0)) throw std::invalid_argument("vae: lr must be positive");
  RandomStream init(derive_seed(seed, "vae-init"));
  enc_mu_.init(ps_, init);
  enc_lv_.init(ps_, init);
  dec_.init(ps_, init);
}

std::vector<FitRecord> Vae::fit(const StateBuffer& buffer, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("vae: fit needs steps >= 1");
  if (buffer.size() == 0)
    throw std::runtime_error("vae: training on an empty buffer");
  std::vector<FitRecord> hist;
  hist.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<double> s = buffer.sample(batch_, stream_);
    std::vector<double> eps(batch_ * d_z_);
    stream_.fill_normal(eps);
    Tape tape;
    NodeId s_node = tape.constant(Tensor({batch_, obs_dim_}, s));
    NodeId mu = enc_mu_.forward(tape, ps_, s_node);
    NodeId lv = enc_lv_.forward(tape, ps_, s_node);
    NodeId z = tape.add(mu, tape.mul(tape.exp_(tape.scale(lv, 0.5)),
                                     tape.constant(Tensor({batch_, d_z_}, eps))));
    NodeId recon = dec_.forward(tape, ps_, z);
    NodeId recon_loss = tape.mean_sq(tape.sub(recon, s_node));
    // Per-element KL to the unit normal: -(1 + lv - mu^2 - e^lv) / 2.
    NodeId kl_el = tape.scale(
        tape.sub(tape.sub(tape.add_scalar(lv, 1.0), tape.square(mu)),
                 tape.exp_(lv)),
        -0.5);
    NodeId kl = tape.mean(kl_el);
    NodeId loss = tape.add(recon_loss, tape.scale(kl, kl_weight_));
    double rv = tape.scalar(recon_loss), kv = tape.scalar(kl);
    tape.backward(loss);
    adam_.step(ps_);
    ps_.zero_grads();
    hist.push_back({rv, kv});
  }
  return hist;
}

double Vae::score(const std::vector<double>& obs) const {
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("vae: score obs dim mismatch");
  std::vector<double> mu = enc_mu_.eval(ps_, obs, 1);
  std::vector<double> recon = dec_.eval(ps_, mu, 1);
  double v = mean_abs_diff(obs, recon);
  if (!std::isfinite(v)) throw std::runtime_error("vae: non-finite score");
  return v;
}

std::uint64_t Vae::checksum() const { return ps_.checksum(); }

namespace {

class NoneEstimator : public NoveltyEstimator {
 public:
  std::vector<FitRecord> fit(const StateBuffer&, std::size_t) override {
    return {};
  }
  double score(const std::vector<double>&) const override { return 0.0; }
  const std::string& method() const override { return method_; }
  std::uint64_t checksum() const override { return 0; }

 private:
  std::string method_ = "none";
};

}  // namespace

std::unique_ptr<NoveltyEstimator> make_estimator(std::size_t obs_dim,
                                                 const NoveltyOptions& opt,
                                                 std::uint64_t seed) {
  if (opt.method == "bigan") return std::make_unique<Bigan>(obs_dim, opt, seed);
  if (opt.method == "lg_only") {
    NoveltyOptions o = opt;
    o.alpha = 1.0;
    return std::make_unique<Bigan>(obs_dim, o, seed, "lg_only");
  }
  if (opt.method == "ld_only") {
    NoveltyOptions o = opt;
    o.alpha = 0.0;
    return std::make_unique<Bigan>(obs_dim, o, seed, "ld_only");
  }
  if (opt.method == "rnd") return std::make_unique<Rnd>(obs_dim, opt, seed);
  if (opt.method == "vae") return std::make_unique<Vae>(obs_dim, opt, seed);
  if (opt.method == "none") return std::make_unique<NoneEstimator>();
  throw std::invalid_argument("unknown novelty method: " + opt.method);
}

}  // namespace adv

#include "adventurer.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "adventurer/config.hpp"
#include "adventurer/harness.hpp"
#include "adventurer/rng.hpp"

using adv::Config;

struct adv_config {
  Config cfg;
};

namespace {

thread_local std::string g_last_error;

void record_error(const char* what) { g_last_error = what ? what : ""; }

// Every boundary function funnels through here: invalid_argument is a
// config-class error, everything else a runtime failure.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return ADV_OK;
  } catch (const std::invalid_argument& e) {
    record_error(e.what());
    return ADV_ERR_CONFIG;
  } catch (const std::exception& e) {
    record_error(e.what());
    return ADV_ERR_RUNTIME;
  } catch (...) {
    record_error("unknown error");
    return ADV_ERR_RUNTIME;
  }
}

}  // namespace

extern "C" {

adv_config* adv_config_create(void) {
  try {
    return new adv_config{};
  } catch (...) {
    record_error("out of memory");
    return nullptr;
  }
}

adv_config* adv_config_load(const char* path) {
  if (path == nullptr) {
    record_error("path is null");
    return nullptr;
  }
  try {
    return new adv_config{Config::from_file(path)};
  } catch (const std::exception& e) {
    record_error(e.what());
    return nullptr;
  }
}

int adv_config_set(adv_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) {
    record_error("null argument");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] { cfg->cfg.set(key, value); });
}

int adv_config_get(const adv_config* cfg, const char* key, char* buf,
                   size_t buf_len) {
  if (cfg == nullptr || key == nullptr || buf == nullptr || buf_len == 0) {
    record_error("null argument");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] {
    const std::string& v = cfg->cfg.get(key);
    std::size_t n = std::min(v.size(), buf_len - 1);
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
  });
}

void adv_config_destroy(adv_config* cfg) { delete cfg; }

int adv_train(const adv_config* cfg, const char* out_dir) {
  if (cfg == nullptr) {
    record_error("null config");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] {
    std::string dir = out_dir ? out_dir : cfg->cfg.get("out.dir");
    adv::train(cfg->cfg, dir);
  });
}

int adv_eval_novelty(const adv_config* cfg, const char* method,
                     double* objective1, double* objective2) {
  if (cfg == nullptr || objective1 == nullptr || objective2 == nullptr) {
    record_error("null argument");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] {
    Config c = cfg->cfg;
    if (method != nullptr) c.set("novelty.method", method);
    c.validate();
    adv::NoveltyOptions opt = c.novelty();
    const auto seeds = static_cast<std::size_t>(c.get_int("eval.seeds"));
    const auto samples = static_cast<std::size_t>(c.get_int("eval.samples"));
    const auto steps = static_cast<std::size_t>(c.get_int("eval.steps"));
    const std::uint64_t root = c.get_uint("train.seed");
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      std::uint64_t rep = adv::derive_seed(root, "replicate", s);
      adv::Corpus corpus =
          adv::make_two_room_corpus(samples, adv::derive_seed(rep, "corpus"));
      adv::SettingsResult r =
          adv::eval_novelty_settings(corpus, opt, steps, rep);
      sum1 += r.objective1;
      sum2 += r.objective2;
    }
    *objective1 = sum1 / static_cast<double>(seeds);
    *objective2 = sum2 / static_cast<double>(seeds);
  });
}

int adv_grid_search(const adv_config* cfg, const char* param,
                    const char* out_csv_path, double* best) {
  if (cfg == nullptr || param == nullptr || best == nullptr) {
    record_error("null argument");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] {
    std::string p = param;
    std::vector<double> values;
    if (p == "alpha")
      values = {0.5, 0.7, 0.9, 1.0};
    else if (p == "beta")
      values = {0.2, 0.3, 0.5};
    else
      throw std::invalid_argument("param must be alpha or beta");
    adv::GridResult g = adv::grid_search(p, values, cfg->cfg);
    std::filesystem::path csv_path =
        out_csv_path != nullptr
            ? std::filesystem::path(out_csv_path)
            : std::filesystem::path(cfg->cfg.get("out.dir")) /
                  ("grid_" + p + ".csv");
    if (csv_path.has_parent_path())
      std::filesystem::create_directories(csv_path.parent_path());
    std::ofstream out(csv_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + csv_path.string());
    out << g.csv;
    *best = g.best;
  });
}

int adv_plot(const char* in_dir, const char* out_dir) {
  if (in_dir == nullptr || out_dir == nullptr) {
    record_error("null argument");
    return ADV_ERR_CONFIG;
  }
  return guarded([&] { adv::emit_plots(in_dir, out_dir); });
}

const char* adv_last_error(void) { return g_last_error.c_str(); }

const char* adv_version(void) { return "0.1.0"; }

}  // extern "C"

// Command-line front end; links only the C API.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "adventurer.h"

namespace {

struct ConfigHandle {
  adv_config* ptr = nullptr;
  ~ConfigHandle() { adv_config_destroy(ptr); }
};

int report(int code) {
  if (code != ADV_OK) std::fprintf(stderr, "error: %s\n", adv_last_error());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Novelty-driven exploration trainer"};
  app.require_subcommand(1);

  std::string config_path, out_dir, method, param, in_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;

  CLI::App* train = app.add_subcommand("train", "Run the training loop");
  train->add_option("--config", config_path, "Config file")->required();
  train->add_option("--seed", seed, "Override train.seed")
      ->each([&](const std::string&) { seed_given = true; });
  train->add_option("--out", out_dir, "Override out.dir");

  CLI::App* eval_cmd = app.add_subcommand(
      "eval-novelty", "Score an estimator on the two-room corpus");
  eval_cmd->add_option("--config", config_path, "Config file")->required();
  eval_cmd->add_option("--method", method, "Estimator method")->required();

  CLI::App* grid = app.add_subcommand("grid-search", "Sweep alpha or beta");
  grid->add_option("--param", param, "alpha or beta")->required();
  grid->add_option("--config", config_path, "Config file")->required();

  CLI::App* plot = app.add_subcommand("plot", "Render metrics to SVG + CSV");
  plot->add_option("--in", in_dir, "Directory of metrics .jsonl files")
      ->required();
  plot->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ADV_ERR_CONFIG;
  }

  if (plot->parsed()) return report(adv_plot(in_dir.c_str(), out_dir.c_str()));

  ConfigHandle cfg;
  cfg.ptr = adv_config_load(config_path.c_str());
  if (cfg.ptr == nullptr) {
    std::fprintf(stderr, "error: %s\n", adv_last_error());
    return ADV_ERR_CONFIG;
  }

  if (train->parsed()) {
    if (seed_given) {
      int rc = adv_config_set(cfg.ptr, "train.seed", std::to_string(seed).c_str());
      if (rc != ADV_OK) return report(rc);
    }
    int rc = adv_train(cfg.ptr, out_dir.empty() ? nullptr : out_dir.c_str());
    if (rc == ADV_OK) {
      char buf[256];
      if (adv_config_get(cfg.ptr, "out.dir", buf, sizeof buf) == ADV_OK)
        std::printf("training complete; metrics in %s\n",
                    out_dir.empty() ? buf : out_dir.c_str());
    }
    return report(rc);
  }

  if (eval_cmd->parsed()) {
    double obj1 = 0.0, obj2 = 0.0;
    int rc = adv_eval_novelty(cfg.ptr, method.c_str(), &obj1, &obj2);
    if (rc == ADV_OK)
      std::printf("method=%s setting1_objective=%.6f setting2_objective=%.6f\n",
                  method.c_str(), obj1, obj2);
    return report(rc);
  }

  if (grid->parsed()) {
    double best = 0.0;
    int rc = adv_grid_search(cfg.ptr, param.c_str(), nullptr, &best);
    if (rc == ADV_OK) {
      char buf[256];
      buf[0] = '\0';
      adv_config_get(cfg.ptr, "out.dir", buf, sizeof buf);
      std::printf("param=%s best=%g table=%s/grid_%s.csv\n", param.c_str(),
                  best, buf, param.c_str());
    }
    return report(rc);
  }

  return ADV_ERR_CONFIG;
}

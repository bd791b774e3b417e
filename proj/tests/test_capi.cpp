#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "adventurer.h"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct ConfigGuard {
  adv_config* c;
  explicit ConfigGuard(adv_config* p) : c(p) {}
  ~ConfigGuard() { adv_config_destroy(c); }
};

}  // namespace

TEST_CASE("c api config round-trips values and reports errors") {
  adv_config* c = adv_config_create();
  REQUIRE(c != nullptr);
  ConfigGuard g(c);

  char buf[64];
  CHECK(adv_config_get(c, "env.name", buf, sizeof buf) == ADV_OK);
  CHECK(std::string(buf) == "sparse_chain");

  CHECK(adv_config_set(c, "ppo.beta", "0.5") == ADV_OK);
  CHECK(adv_config_get(c, "ppo.beta", buf, sizeof buf) == ADV_OK);
  CHECK(std::string(buf) == "0.5");

  CHECK(adv_config_set(c, "no.such.key", "1") == ADV_ERR_CONFIG);
  CHECK(std::strlen(adv_last_error()) > 0);

  char tiny[4];
  CHECK(adv_config_get(c, "env.name", tiny, sizeof tiny) == ADV_OK);
  CHECK(std::string(tiny) == "spa");  // truncated, still terminated

  CHECK(adv_config_set(nullptr, "ppo.beta", "0.5") == ADV_ERR_CONFIG);
  CHECK(adv_config_get(c, "ppo.beta", nullptr, 8) == ADV_ERR_CONFIG);
  CHECK(adv_config_get(c, "ppo.beta", buf, 0) == ADV_ERR_CONFIG);
}

TEST_CASE("c api config load") {
  fs::path dir = fresh_dir("adv_capi_cfg");
  fs::path f = dir / "run.cfg";
  {
    std::ofstream out(f);
    out << "env.chain_n = 9\n";
  }
  adv_config* c = adv_config_load(f.string().c_str());
  REQUIRE(c != nullptr);
  ConfigGuard g(c);
  char buf[16];
  CHECK(adv_config_get(c, "env.chain_n", buf, sizeof buf) == ADV_OK);
  CHECK(std::string(buf) == "9");

  CHECK(adv_config_load((dir / "missing.cfg").string().c_str()) == nullptr);
  CHECK(std::strlen(adv_last_error()) > 0);
  CHECK(adv_config_load(nullptr) == nullptr);
  fs::remove_all(dir);
}

TEST_CASE("c api train writes the run directory") {
  fs::path dir = fresh_dir("adv_capi_train");
  adv_config* c = adv_config_create();
  REQUIRE(c != nullptr);
  ConfigGuard g(c);
  adv_config_set(c, "train.epochs", "1");
  adv_config_set(c, "train.episodes", "2");
  adv_config_set(c, "train.horizon", "5");
  adv_config_set(c, "env.chain_n", "4");
  adv_config_set(c, "bigan.steps_per_epoch", "2");

  CHECK(adv_train(c, dir.string().c_str()) == ADV_OK);
  CHECK(fs::exists(dir / "metrics.jsonl"));
  CHECK(fs::exists(dir / "timings.jsonl"));
  CHECK(fs::exists(dir / "config.txt"));
  CHECK(fs::exists(dir / "policy.ckpt"));

  // Null out_dir falls back to the configured out.dir.
  fs::path dir2 = fresh_dir("adv_capi_train2");
  adv_config_set(c, "out.dir", dir2.string().c_str());
  CHECK(adv_train(c, nullptr) == ADV_OK);
  CHECK(fs::exists(dir2 / "metrics.jsonl"));

  adv_config_set(c, "train.epochs", "0");
  CHECK(adv_train(c, dir.string().c_str()) == ADV_ERR_CONFIG);
  CHECK(adv_train(nullptr, dir.string().c_str()) == ADV_ERR_CONFIG);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("c api plot renders a train run") {
  fs::path run = fresh_dir("adv_capi_plotrun");
  fs::path out = fresh_dir("adv_capi_plotout");
  adv_config* c = adv_config_create();
  REQUIRE(c != nullptr);
  ConfigGuard g(c);
  adv_config_set(c, "train.epochs", "2");
  adv_config_set(c, "train.episodes", "2");
  adv_config_set(c, "train.horizon", "5");
  adv_config_set(c, "env.chain_n", "4");
  adv_config_set(c, "novelty.method", "none");
  REQUIRE(adv_train(c, run.string().c_str()) == ADV_OK);

  CHECK(adv_plot(run.string().c_str(), out.string().c_str()) == ADV_OK);
  CHECK(fs::exists(out / "aggregate.csv"));
  CHECK(fs::exists(out / "mean_return.svg"));

  fs::path empty = fresh_dir("adv_capi_plotempty");
  CHECK(adv_plot(empty.string().c_str(), out.string().c_str()) ==
        ADV_ERR_RUNTIME);
  CHECK(adv_plot(nullptr, out.string().c_str()) == ADV_ERR_CONFIG);
  fs::remove_all(run);
  fs::remove_all(out);
  fs::remove_all(empty);
}

TEST_CASE("c api novelty evaluation returns finite objectives") {
  adv_config* c = adv_config_create();
  REQUIRE(c != nullptr);
  ConfigGuard g(c);
  adv_config_set(c, "eval.samples", "12");
  adv_config_set(c, "eval.steps", "8");
  adv_config_set(c, "eval.seeds", "1");

  double o1 = -1e300, o2 = -1e300;
  CHECK(adv_eval_novelty(c, "rnd", &o1, &o2) == ADV_OK);
  CHECK(o1 == o1);
  CHECK(o2 >= 0.0);

  double p1 = 0, p2 = 0;
  CHECK(adv_eval_novelty(c, nullptr, &p1, &p2) == ADV_OK);  // config method
  CHECK(adv_eval_novelty(c, "gan", &p1, &p2) == ADV_ERR_CONFIG);
  CHECK(adv_eval_novelty(c, "rnd", nullptr, &p2) == ADV_ERR_CONFIG);
  CHECK(adv_eval_novelty(nullptr, "rnd", &p1, &p2) == ADV_ERR_CONFIG);
}

TEST_CASE("c api grid search writes the csv table") {
  fs::path dir = fresh_dir("adv_capi_grid");
  fs::path csv = dir / "grid_beta.csv";
  adv_config* c = adv_config_create();
  REQUIRE(c != nullptr);
  ConfigGuard g(c);
  adv_config_set(c, "train.epochs", "2");
  adv_config_set(c, "train.episodes", "2");
  adv_config_set(c, "train.horizon", "5");
  adv_config_set(c, "env.chain_n", "4");
  adv_config_set(c, "novelty.method", "none");
  adv_config_set(c, "eval.seeds", "1");

  double best = -1;
  CHECK(adv_grid_search(c, "beta", csv.string().c_str(), &best) == ADV_OK);
  CHECK((best == 0.2 || best == 0.3 || best == 0.5));
  std::string table = slurp(csv);
  CHECK(table.find("\r\n") != std::string::npos);
  CHECK(table.rfind("param,value,replicate", 0) == 0);

  CHECK(adv_grid_search(c, "gamma", csv.string().c_str(), &best) ==
        ADV_ERR_CONFIG);
  CHECK(adv_grid_search(nullptr, "beta", csv.string().c_str(), &best) ==
        ADV_ERR_CONFIG);
  fs::remove_all(dir);
}

TEST_CASE("c api version string") {
  CHECK(std::string(adv_version()) == "0.1.0");
}

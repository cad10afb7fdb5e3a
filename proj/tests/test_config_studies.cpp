#include <doctest.h>

#include <cmath>
#include <sstream>

#include "landau/config.hpp"
#include "landau/studies.hpp"

using namespace landau;

TEST_CASE("flat key=value parsing with comments and whitespace") {
  std::istringstream in(
      "# experiment header\n"
      "n = 128\n"
      "dt = 0.002   # inline comment\n"
      "gamma = -0.5\n"
      "\n"
      "  eta = 0.05\n"
      "study.n_list = 32,64,128\n"
      "study.t_checkpoints = 0,0.1,0.2\n"
      "init.family = mixture\n"
      "init.sigma = 0.4\n"
      "init.sep = 4\n");
  Config cfg = parse_config(in);
  CHECK(cfg.sim.n == 128);
  CHECK(cfg.sim.dt == 0.002);
  CHECK(cfg.sim.kernel.gamma == -0.5);
  CHECK(cfg.sim.kernel.eta == 0.05);
  REQUIRE(cfg.n_list.size() == 3);
  CHECK(cfg.n_list[2] == 128);
  REQUIRE(cfg.t_checkpoints.size() == 3);
  CHECK(cfg.t_checkpoints[1] == 0.1);
  const auto* m = std::get_if<GaussianMixture>(&cfg.sim.init);
  REQUIRE(m != nullptr);
  CHECK(m->sigma == 0.4);
  CHECK((m->center2 - m->center1).norm() == doctest::Approx(4.0));
}

TEST_CASE("parser error reporting") {
  Config cfg;
  CHECK_THROWS_AS(config_set(cfg, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "dt", "fast"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "n", "12x"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "init.family", "cauchy"), ConfigError);
  // family-specific keys require the matching family
  config_set(cfg, "init.family", "gaussian");
  CHECK_THROWS_AS(config_set(cfg, "init.radius", "2"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "init.var_x", "2"), ConfigError);
  config_set(cfg, "init.family", "diag-gaussian");
  CHECK_NOTHROW(config_set(cfg, "init.var_x", "2"));
  CHECK_THROWS_AS(config_set(cfg, "init.sigma", "1"), ConfigError);
  // malformed lines
  std::istringstream bad("n 128\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream empty_list("study.n_list =\n");
  CHECK_THROWS_AS(parse_config(empty_list), ConfigError);
  CHECK_THROWS_AS(load_config_file("/no/such/file.cfg"), ConfigError);
}

TEST_CASE("echo round-trips through the parser") {
  Config cfg;
  config_set(cfg, "n", "96");
  config_set(cfg, "gamma", "-1.25");
  config_set(cfg, "init.family", "diag-gaussian");
  config_set(cfg, "init.var_x", "4");
  config_set(cfg, "init.var_z", "0.25");
  config_set(cfg, "anchors.delta0", "0.4");
  config_set(cfg, "blob.eps", "0.07");
  std::istringstream echoed(config_echo(cfg));
  Config back = parse_config(echoed);
  CHECK(config_echo(back) == config_echo(cfg));
  CHECK(back.anchors_delta0_override == 0.4);
  const auto* d = std::get_if<DiagonalGaussian>(&back.sim.init);
  REQUIRE(d != nullptr);
  CHECK(d->variances.x == 4.0);
  CHECK(d->variances.z == 0.25);
}

TEST_CASE("every accepted key is listed and settable") {
  for (const auto& [key, desc] : config_keys()) {
    CHECK_FALSE(desc.empty());
    Config cfg;
    std::string value = "1";
    if (key == "init.family") value = "ball";
    if (key == "init.radius") {
      config_set(cfg, "init.family", "ball");
    } else if (key == "init.var_x" || key == "init.var_y" ||
               key == "init.var_z") {
      config_set(cfg, "init.family", "diag-gaussian");
    } else if (key == "init.sep") {
      config_set(cfg, "init.family", "mixture");
    }
    CHECK_NOTHROW(config_set(cfg, key, value));
  }
}

TEST_CASE("automatic blob radius follows the resolution power law") {
  Config cfg;
  CHECK(cfg.effective_blob_eps(64) ==
        doctest::Approx(std::pow(64.0, -0.8 / 3.0)));
  CHECK(cfg.effective_blob_eps(4096) ==
        doctest::Approx(std::pow(4096.0, -0.8 / 3.0)));
  // decreasing in N, and the explicit setting wins
  CHECK(cfg.effective_blob_eps(512) < cfg.effective_blob_eps(64));
  cfg.blob_eps = 0.123;
  CHECK(cfg.effective_blob_eps(64) == 0.123);
}

TEST_CASE("study preconditions are hard errors") {
  Config cfg;
  cfg.sim.kernel = {-0.5, 0.05, 8};
  cfg.n_list = {16, 32};
  cfg.seeds = 8;
  cfg.n_ref = 256;

  Config bad = cfg;
  bad.sim.kernel.gamma = -1.5;  // rate study needs gamma in (-1,0)
  CHECK_THROWS_AS(run_rate_study(bad), ConfigError);
  bad = cfg;
  bad.n_list.clear();
  CHECK_THROWS_AS(run_rate_study(bad), ConfigError);
  CHECK_THROWS_AS(run_trigger_study(bad), ConfigError);
  bad = cfg;
  bad.n_list = {32, 16};  // not strictly increasing
  CHECK_THROWS_AS(run_rate_study(bad), ConfigError);
  bad = cfg;
  bad.seeds = 4;
  CHECK_THROWS_AS(run_rate_study(bad), ConfigError);
  bad = cfg;
  bad.n_ref = 128;  // under-resolved reference
  CHECK_THROWS_AS(run_rate_study(bad), ConfigError);

  bad = cfg;
  bad.sim.n = 256;  // dissipation study needs n >= 512
  bad.seeds = 16;
  CHECK_THROWS_AS(run_dissipation_study(bad), ConfigError);
  bad.sim.n = 512;
  bad.seeds = 8;
  CHECK_THROWS_AS(run_dissipation_study(bad), ConfigError);
  bad.seeds = 16;
  bad.t_checkpoints.clear();
  CHECK_THROWS_AS(run_dissipation_study(bad), ConfigError);
}

TEST_CASE("manifest serialization carries the echo verbatim") {
  Config cfg;
  RunManifest m;
  m.config_echo = config_echo(cfg);
  m.seed = 42;
  m.version = "test";
  m.wall_seconds = 1.5;
  std::string j = m.to_json();
  CHECK(j.find("\"seed\": 42") != std::string::npos);
  CHECK(j.find("\"version\": \"test\"") != std::string::npos);
  CHECK(j.find("\"wall_seconds\": 1.5") != std::string::npos);
}

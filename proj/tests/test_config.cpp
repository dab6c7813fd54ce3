#include <doctest.h>

#include "tbdd/config.hpp"

using namespace tbdd;

TEST_CASE("defaults validate cleanly") {
  SimConfig cfg;
  CHECK(validate(cfg).empty());
}

TEST_CASE("dump and reparse round-trips the config") {
  SimConfig cfg;
  cfg.network.n_total = 24;
  cfg.network.d_shards = 3;
  cfg.attack.h_dishonest = 5;
  cfg.attack.kappa = 0.75;
  cfg.trust.alpha = 0.25;
  cfg.trust.beta = 0.25;
  cfg.trust.mu = 0.5;
  cfg.txgen.resample_each_episode = false;
  cfg.dqn.epochs = 33;
  auto parsed = parse_config_text(dump_config(cfg));
  REQUIRE(parsed.ok());
  CHECK(parsed.value().network.n_total == 24);
  CHECK(parsed.value().network.d_shards == 3);
  CHECK(parsed.value().attack.h_dishonest == 5);
  CHECK(parsed.value().attack.kappa == 0.75);
  CHECK(parsed.value().trust.mu == 0.5);
  CHECK(parsed.value().txgen.resample_each_episode == false);
  CHECK(parsed.value().dqn.epochs == 33);
}

TEST_CASE("mix weights must sum to one exactly") {
  auto r = parse_config_text("[trust]\nalpha = 0.5\nbeta = 0.3\nmu = 0.3\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().code == Errc::config_invalid);
  CHECK(r.error().message.find("trust.alpha") != std::string::npos);
}

TEST_CASE("network must fit d_shards * n_min nodes") {
  auto r = parse_config_text("[network]\nn_total = 7\nd_shards = 2\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().message.find("network.n_total") != std::string::npos);
}

TEST_CASE("unknown keys and malformed values are rejected with the key name") {
  auto unknown = parse_config_text("[network]\nnodes = 16\n");
  REQUIRE_FALSE(unknown.ok());
  CHECK(unknown.error().message.find("network.nodes") != std::string::npos);

  auto bad_value = parse_config_text("[attack]\nfail_prob = maybe\n");
  REQUIRE_FALSE(bad_value.ok());
  CHECK(bad_value.error().message.find("attack.fail_prob") != std::string::npos);
}

TEST_CASE("probability bounds are enforced field by field") {
  auto tau = parse_config_text("[attack]\ntau = 1.5\n");
  REQUIRE_FALSE(tau.ok());
  CHECK(tau.error().message.find("attack.tau") != std::string::npos);

  auto rho = parse_config_text("[trust]\nrho_t = 1.0\n");
  REQUIRE_FALSE(rho.ok());
  CHECK(rho.error().message.find("trust.rho_t") != std::string::npos);

  auto epochs = parse_config_text("[dqn]\nepochs = 12\n");
  REQUIRE_FALSE(epochs.ok());
  CHECK(epochs.error().message.find("dqn.epochs") != std::string::npos);
}

TEST_CASE("overrides win over file values and are validated") {
  SimConfig cfg;
  auto ok = apply_overrides(cfg, {{"network.n_total", "32"}, {"attack.kappa", "0.5"}});
  REQUIRE(ok.ok());
  CHECK(ok.value().network.n_total == 32);
  CHECK(ok.value().attack.kappa == 0.5);

  auto bad = apply_overrides(cfg, {{"risk.rho_cr", "2.0"}});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().message.find("risk.rho_cr") != std::string::npos);
}

TEST_CASE("comments and blank lines are ignored") {
  auto r = parse_config_text("# comment\n\n[network]\nn_total = 20  # inline\n");
  REQUIRE(r.ok());
  CHECK(r.value().network.n_total == 20);
}

TEST_CASE("config_keys covers the dump output") {
  auto keys = config_keys();
  CHECK(keys.size() > 40);
  for (const auto& key : {"network.n_total", "attack.kappa", "trust.rho_t", "risk.rho_cr",
                          "reward.lambda_b", "dqn.epochs", "ppo.clip_ratio",
                          "throughput.cst_cost"}) {
    CHECK(std::find(keys.begin(), keys.end(), key) != keys.end());
  }
}

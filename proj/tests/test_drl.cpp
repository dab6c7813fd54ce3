#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "tbdd/drl.hpp"
#include "tbdd/environment.hpp"
#include "tbdd/harness.hpp"

using namespace tbdd;
namespace tt = tbdd::testing;

namespace {

SimConfig toy_cfg(int n, int d, int n_min, uint64_t seed) {
  SimConfig cfg;
  cfg.network.n_total = n;
  cfg.network.d_shards = d;
  cfg.network.n_min = n_min;
  cfg.network.seed = seed;
  return cfg;
}

class KeepStrategy : public ReshardingStrategy {
 public:
  std::string name() const override { return "keep"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng&,
                                  std::string*) override {
    return snap.assignment.raw();
  }
};

Snapshot warm_snapshot(const SimConfig& cfg, int episodes = 2) {
  Environment env(cfg, "warm");
  KeepStrategy keep;
  for (int e = 0; e < episodes; ++e) {
    auto row = env.step_episode(keep);
    REQUIRE(row.ok());
  }
  return env.snapshot();
}

DqnConfig fast_dqn() {
  DqnConfig q;
  q.epochs = 30;
  q.samples_per_epoch = 12;
  q.updates_per_epoch = 6;
  q.hidden_units = 16;
  q.epsilon_decay_steps = 250;
  q.learning_rate = 5e-3;
  return q;
}

PpoConfig fast_ppo() {
  PpoConfig p;
  p.epochs = 30;
  p.rollout_batch = 24;
  p.hidden_units = 16;
  p.learning_rate = 2e-3;
  return p;
}

}  // namespace

TEST_CASE("q-values regress to a constant reward") {
  auto cfg = toy_cfg(6, 2, 3, 1);
  std::vector<double> features(12, 0.5);
  auto q = fast_dqn();
  q.epochs = 100;
  q.learning_rate = 2e-2;
  DeterministicRng rng(3, "const");
  double c = 1.7;
  auto policy = dqn_train_on(
      features, cfg.network, [c](const ShardAssignment&) { return c; }, q, rng);
  auto values = policy.net.forward(features);
  for (double v : values) CHECK(std::fabs(v - c) < 0.05);
}

TEST_CASE("zero epsilon makes the sampled behavior deterministic") {
  auto cfg = toy_cfg(6, 2, 3, 2);
  auto snap = warm_snapshot(cfg);
  auto greedy_cfg = cfg;
  greedy_cfg.dqn = fast_dqn();
  greedy_cfg.dqn.epsilon_start = 0.0;
  greedy_cfg.dqn.epsilon_end = 0.0;
  DeterministicRng r1(5, "dqn");
  DeterministicRng r2(5, "dqn");
  auto p1 = dqn_train(snap, greedy_cfg, r1);
  auto p2 = dqn_train(snap, greedy_cfg, r2);
  CHECK(p1.net.params() == p2.net.params());
}

TEST_CASE("training is deterministic for a fixed seed and snapshot") {
  auto cfg = toy_cfg(8, 2, 4, 9);
  cfg.attack.h_dishonest = 2;
  cfg.dqn = fast_dqn();
  cfg.ppo = fast_ppo();
  auto snap = warm_snapshot(cfg);
  DeterministicRng r1(11, "train");
  DeterministicRng r2(11, "train");
  auto d1 = dqn_train(snap, cfg, r1);
  auto d2 = dqn_train(snap, cfg, r2);
  CHECK(d1.net.params() == d2.net.params());
  CHECK(d1.best_seen_reward == d2.best_seen_reward);

  DeterministicRng r3(12, "train");
  DeterministicRng r4(12, "train");
  auto p1 = ppo_train(snap, cfg, r3);
  auto p2 = ppo_train(snap, cfg, r4);
  CHECK(p1.net.params() == p2.net.params());
  CHECK(p1.critic.params() == p2.critic.params());
}

TEST_CASE("toy optimum: learners land within five percent of brute force") {
  int dqn_hits = 0, ppo_hits = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = toy_cfg(4, 2, 2, seed);
    cfg.dqn = fast_dqn();
    cfg.ppo = fast_ppo();
    cfg.attack.h_dishonest = 1;
    auto snap = warm_snapshot(cfg, 1);
    auto oracle = brute_force_oracle(snap, cfg);
    REQUIRE(oracle.ok());
    double best = oracle.value().breakdown.total;
    double floor = best - 0.05 * std::fabs(best);

    DeterministicRng rng(seed, "strategy");
    auto dqn_policy = dqn_train(snap, cfg, rng.split("dqn"));
    auto dqn_prop = dqn_policy.final_proposal(snap, cfg, nullptr);
    if (virtual_reward(snap, dqn_prop, cfg).total >= floor) ++dqn_hits;

    auto ppo_policy = ppo_train(snap, cfg, rng.split("ppo"));
    auto ppo_prop = ppo_policy.final_proposal(snap, cfg, nullptr);
    if (virtual_reward(snap, ppo_prop, cfg).total >= floor) ++ppo_hits;
  }
  CHECK(dqn_hits >= 8);
  CHECK(ppo_hits >= 8);
}

TEST_CASE("training curves improve from the first to the last ten epochs") {
  // Production-default training configs; the property is part of their contract.
  int dqn_ok = 0, ppo_ok = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = toy_cfg(8, 2, 4, seed);
    cfg.attack.h_dishonest = 2;
    auto snap = warm_snapshot(cfg, 1);
    auto mean_of = [](const std::vector<TrainingCurvePoint>& curve, size_t from, size_t to) {
      double acc = 0.0;
      for (size_t k = from; k < to; ++k) acc += curve[k].mean_reward;
      return acc / static_cast<double>(to - from);
    };
    DeterministicRng rng(seed, "curve");
    auto dqn_policy = dqn_train(snap, cfg, rng.split("dqn"));
    const auto& dc = dqn_policy.curve;
    if (mean_of(dc, dc.size() - 10, dc.size()) >= mean_of(dc, 0, 10)) ++dqn_ok;

    auto ppo_policy = ppo_train(snap, cfg, rng.split("ppo"));
    const auto& pc = ppo_policy.curve;
    if (mean_of(pc, pc.size() - 10, pc.size()) >= mean_of(pc, 0, 10)) ++ppo_ok;
  }
  CHECK(dqn_ok >= 9);
  CHECK(ppo_ok >= 9);
}

TEST_CASE("per-node softmax probabilities sum to one") {
  auto cfg = toy_cfg(8, 2, 4, 4);
  cfg.ppo = fast_ppo();
  auto snap = warm_snapshot(cfg, 1);
  DeterministicRng rng(7, "ppo");
  auto policy = ppo_train(snap, cfg, rng);
  auto logits = policy.preferences(snap);
  for (int i = 0; i < 8; ++i) {
    double z0 = logits[static_cast<size_t>(i) * 2];
    double z1 = logits[static_cast<size_t>(i) * 2 + 1];
    double hi = std::max(z0, z1);
    double e0 = std::exp(z0 - hi), e1 = std::exp(z1 - hi);
    double sum = e0 / (e0 + e1) + e1 / (e0 + e1);
    CHECK(std::fabs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("repair fixes a uniformly biased policy") {
  auto net_cfg = tt::net(8, 2);
  // All nodes prefer shard 0 strongly.
  std::vector<double> prefs(16, 0.0);
  for (int i = 0; i < 8; ++i) prefs[static_cast<size_t>(i) * 2] = 1.0;
  bool repaired = false;
  auto fixed = repair_assignment(prefs, ShardAssignment{std::vector<int>(8, 0)}, net_cfg,
                                 &repaired);
  CHECK(repaired);
  auto validated = validate_assignment(fixed, net_cfg);
  CHECK(validated.ok());
}

TEST_CASE("valid raw actions pass through repair untouched") {
  auto net_cfg = tt::net(8, 2);
  std::vector<double> prefs(16, 0.0);
  std::vector<int> raw{0, 1, 0, 1, 0, 1, 0, 1};
  bool repaired = true;
  auto out = repair_assignment(prefs, ShardAssignment{raw}, net_cfg, &repaired);
  CHECK_FALSE(repaired);
  CHECK(out.shard_of == raw);
}

TEST_CASE("repair moves weakest-margin nodes first") {
  // Independent greedy re-derivation on random preference tables.
  DeterministicRng rng(15, "repair");
  for (int trial = 0; trial < 40; ++trial) {
    int n = 6 + static_cast<int>(rng.uniform_below(7));  // 6..12
    int d = 2;
    auto net_cfg = tt::net(n, d, 2);
    std::vector<double> prefs(static_cast<size_t>(n * d));
    for (auto& v : prefs) v = rng.uniform01();
    std::vector<int> raw(static_cast<size_t>(n));
    for (auto& s : raw) s = static_cast<int>(rng.uniform_below(2));

    auto got = repair_assignment(prefs, ShardAssignment{raw}, net_cfg, nullptr);

    // Oracle: same contract, simulated independently.
    auto expect = raw;
    std::vector<int> counts(2, 0);
    for (int s : expect) ++counts[static_cast<size_t>(s)];
    while (counts[0] < 2 || counts[1] < 2) {
      int deficient = counts[0] < 2 ? 0 : 1;  // at most one side can be short
      int donor = 1 - deficient;
      int pick = -1;
      double weakest = 1e18;
      for (int i = 0; i < n; ++i) {
        if (expect[static_cast<size_t>(i)] != donor) continue;
        double margin = prefs[static_cast<size_t>(i) * 2 + static_cast<size_t>(donor)] -
                        prefs[static_cast<size_t>(i) * 2 + static_cast<size_t>(deficient)];
        if (margin < weakest) {
          weakest = margin;
          pick = i;
        }
      }
      expect[static_cast<size_t>(pick)] = deficient;
      ++counts[static_cast<size_t>(deficient)];
      --counts[static_cast<size_t>(donor)];
    }
    CHECK(got.shard_of == expect);
  }
}

TEST_CASE("final proposal falls back to the best seen sample when greedy is worse") {
  auto cfg = toy_cfg(6, 2, 3, 21);
  cfg.dqn = fast_dqn();
  auto snap = warm_snapshot(cfg, 1);
  DeterministicRng rng(21, "dqn");
  auto policy = dqn_train(snap, cfg, rng);
  REQUIRE(policy.has_best_seen);
  std::string note;
  auto proposal = policy.final_proposal(snap, cfg, &note);
  double got = virtual_reward(snap, proposal, cfg).total;
  CHECK(got >= policy.best_seen_reward - 1e-12);
  // Either path must yield a valid allocation.
  CHECK(validate_assignment(proposal, cfg.network).ok());
}

TEST_CASE("strategy wrappers produce valid proposals and matching names") {
  auto cfg = toy_cfg(8, 2, 4, 31);
  cfg.attack.h_dishonest = 2;
  cfg.dqn = fast_dqn();
  cfg.ppo = fast_ppo();
  auto snap = warm_snapshot(cfg, 1);
  DqnStrategy dqn(cfg);
  PpoStrategy ppo(cfg);
  CHECK(dqn.name() == "dqn");
  CHECK(ppo.name() == "ppo");
  DeterministicRng r1(1, "s");
  DeterministicRng r2(1, "s");
  auto a = dqn.propose(snap, r1, nullptr);
  auto b = ppo.propose(snap, r2, nullptr);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(validate_assignment(a.value(), cfg.network).ok());
  CHECK(validate_assignment(b.value(), cfg.network).ok());
}

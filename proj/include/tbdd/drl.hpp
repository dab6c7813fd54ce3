#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tbdd/config.hpp"
#include "tbdd/environment.hpp"
#include "tbdd/mlp.hpp"
#include "tbdd/strategy.hpp"

namespace tbdd {

struct TrainingCurvePoint {
  int epoch = 0;
  double mean_reward = 0.0;
  double loss = 0.0;
};

// A policy trained against one snapshot. The action space is factored: the
// head emits N x D scores and each node picks among its D entries
// independently (argmax for extraction). The best valid proposal sampled
// during training is kept as a fallback.
struct TrainedPolicy {
  Mlp net;          // Q-values (DQN) or logits (PPO actor)
  Mlp critic;       // PPO value head; unused by DQN
  int n = 0;
  int d = 0;
  std::vector<TrainingCurvePoint> curve;
  ShardAssignment best_seen;
  double best_seen_reward = 0.0;
  bool has_best_seen = false;

  // N x D preference scores for the snapshot's encoded state.
  std::vector<double> preferences(const Snapshot& snap) const;

  // Per-node argmax decode, no validity handling.
  ShardAssignment raw_greedy(const Snapshot& snap) const;

  // Greedy decode, repaired to satisfy the minimum shard size if needed,
  // then compared with the best-seen proposal; the higher-reward one wins.
  // `note` gains "repaired" / "fallback" tags.
  ShardAssignment final_proposal(const Snapshot& snap, const SimConfig& cfg,
                                 std::string* note) const;
};

// Moves minimum-margin nodes out of the largest shard into deficient shards
// until every shard reaches n_min. `prefs` is the N x D score table the
// margins are computed from. Sets *repaired when a move happened.
ShardAssignment repair_assignment(const std::vector<double>& prefs, ShardAssignment raw,
                                  const NetworkConfig& net, bool* repaired);

// Scores one proposed allocation against the frozen snapshot.
using ProposalReward = std::function<double(const ShardAssignment&)>;

// Fitted-Q on immediate rewards (the resharding decision is single-step, so
// the TD target is the reward itself) with epsilon-greedy per-node
// exploration and replayed minibatches. A target copy is kept and synced on
// schedule although nothing bootstraps from it here.
TrainedPolicy dqn_train(const Snapshot& snap, const SimConfig& cfg,
                        const DeterministicRng& rng);

// Clipped-surrogate PPO: per-node categorical actor, scalar critic,
// advantage = reward - V(s).
TrainedPolicy ppo_train(const Snapshot& snap, const SimConfig& cfg,
                        const DeterministicRng& rng);

// The training cores against an arbitrary reward signal (the snapshot-based
// entry points wrap virtual_reward; tests substitute oracles).
TrainedPolicy dqn_train_on(const std::vector<double>& features, const NetworkConfig& net,
                           const ProposalReward& reward, const DqnConfig& cfg,
                           const DeterministicRng& rng);
TrainedPolicy ppo_train_on(const std::vector<double>& features, const NetworkConfig& net,
                           const ProposalReward& reward, const PpoConfig& cfg,
                           const DeterministicRng& rng);

class DqnStrategy : public ReshardingStrategy {
 public:
  explicit DqnStrategy(SimConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return "dqn"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                  std::string* note) override;

 private:
  SimConfig cfg_;
};

class PpoStrategy : public ReshardingStrategy {
 public:
  explicit PpoStrategy(SimConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return "ppo"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                  std::string* note) override;

 private:
  SimConfig cfg_;
};

}  // namespace tbdd

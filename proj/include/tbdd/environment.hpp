#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbdd/config.hpp"
#include "tbdd/metrics.hpp"
#include "tbdd/reward.hpp"
#include "tbdd/risk.hpp"
#include "tbdd/strategy.hpp"

namespace tbdd {

struct TrustState {
  LocalTrustTable ltt;
  GlobalTrustTable gtt;
  NormalizedTrust g_norm;
};

struct EpisodeState {
  int episode = 0;  // episodes completed so far
  ValidatedAssignment assignment;
  TrustState trust;
  TransactionMatrix tx;
  RiskReport last_report;
  EpisodeRow metrics_row;
  BlockVerificationTable last_bvt;
};

// The four-step episode loop: simulate consensus on the current allocation,
// update the trust tables, evaluate risk, reshard via the strategy when
// triggered, score the applied allocation, and roll the workload forward.
class Environment {
 public:
  // `initial` defaults to contiguous balanced blocks by node id;
  // `profiles` defaults to seed-scattered dishonest placement; `initial_tx`
  // replaces the episode-0 generated workload (useful with
  // txgen.resample_each_episode = false for a fully pinned run).
  Environment(SimConfig cfg, std::string strategy_label,
              std::optional<ShardAssignment> initial = std::nullopt,
              std::optional<std::vector<NodeProfile>> profiles = std::nullopt,
              std::optional<TransactionMatrix> initial_tx = std::nullopt);

  const EpisodeState& state() const { return state_; }
  const std::vector<NodeProfile>& profiles() const { return profiles_; }
  const SimConfig& config() const { return cfg_; }
  int strategy_calls() const { return strategy_calls_; }

  // Freezes the current trust/transaction/allocation view.
  Snapshot snapshot() const;

  // Runs one episode and returns its metric row (also kept in the state).
  Result<EpisodeRow> step_episode(ReshardingStrategy& strategy);

  // Scores a proposal against a frozen snapshot without touching live state.
  // Constraint violations come back as the fixed penalty breakdown.
  RewardBreakdown virtual_reward(const Snapshot& snap, const ShardAssignment& proposal) const;

  // Per node: one-hot shard membership (D), normalized trust (1), and the
  // fraction of the node's transaction volume landing in each shard (D).
  static std::vector<double> encode_state(const Snapshot& snap);

  // Balanced contiguous-block assignment used as the default start.
  static ShardAssignment block_assignment(const NetworkConfig& net);

 private:
  TransactionMatrix sample_tx(int episode) const;

  SimConfig cfg_;
  std::string strategy_label_;
  std::vector<NodeProfile> profiles_;
  EpisodeState state_;
  int strategy_calls_ = 0;
};

// Standalone form of Environment::virtual_reward for callers that only hold
// a snapshot (the DRL trainers, the oracle).
RewardBreakdown virtual_reward(const Snapshot& snap, const ShardAssignment& proposal,
                               const SimConfig& cfg);

}  // namespace tbdd

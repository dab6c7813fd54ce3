#pragma once

#include "tbdd/assignment.hpp"
#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/risk.hpp"
#include "tbdd/trust.hpp"
#include "tbdd/txmatrix.hpp"

namespace tbdd {

// The six components and their scalar sum. `total` always equals
// xi + varrho + eta - psi + omega_in - omega_cr; `violation` marks the fixed
// penalty returned for proposals that break the minimum-shard-size
// constraint (all components zero except xi, which carries the penalty).
struct RewardBreakdown {
  double xi = 0.0;        // shard load balance
  double varrho = 0.0;    // corruption
  double eta = 0.0;       // CST ratio shaping
  double psi = 0.0;       // node shifting ratio
  double omega_in = 0.0;  // intra-shard trust variance
  double omega_cr = 0.0;  // cross-shard trust variance
  double total = 0.0;
  bool violation = false;
};

// Inputs a proposal is scored against; assembled by the environment.
struct RewardInputs {
  const GlobalTrustTable* gtt = nullptr;
  const TransactionMatrix* tx = nullptr;
  const ValidatedAssignment* prev = nullptr;
};

double shard_balance(const ValidatedAssignment& a, const RewardConfig& cfg);

double corruption_reward(const RiskReport& report, const RewardConfig& cfg);

double cst_reward(double cst_ratio, const RiskConfig& risk_cfg, const RewardConfig& cfg);

Result<double> shift_penalty(const ValidatedAssignment& prev,
                             const ValidatedAssignment& next);

double intra_trust_variance(const GlobalTrustTable& g, const ValidatedAssignment& a);

double cross_trust_variance(const GlobalTrustTable& g, const ValidatedAssignment& a);

// Scores `proposal` against the snapshot. A proposal violating the minimum
// shard size yields Errc::constraint_violation with the offending shard and
// size in the payload.
Result<RewardBreakdown> total_reward(const RewardInputs& in, const ShardAssignment& proposal,
                                     const NetworkConfig& net, const TrustConfig& trust_cfg,
                                     const RiskConfig& risk_cfg, const RewardConfig& cfg);

// The fixed penalty the environment substitutes for constraint violations.
RewardBreakdown violation_penalty(const RewardConfig& cfg);

}  // namespace tbdd

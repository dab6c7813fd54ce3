#pragma once

#include <vector>

#include "tbdd/assignment.hpp"
#include "tbdd/config.hpp"
#include "tbdd/trust.hpp"
#include "tbdd/txmatrix.hpp"

namespace tbdd {

enum class Trigger { not_trigger, trigger };
enum class TriggerReason { none, shard_corrupted, cst_exceeded };

struct RiskReport {
  std::vector<std::vector<int>> high_risk;  // h_x: per-shard node ids with G_i < rho_t
  std::vector<double> shard_means;          // theta_x
  double grand_mean = 0.0;                  // mean of shard means
  std::vector<bool> corrupted;              // |h_x| > f_intra(N_x)
  int corrupted_count = 0;
  double cst_ratio = 0.0;
  Trigger trigger = Trigger::not_trigger;
  TriggerReason reason = TriggerReason::none;
  int corrupted_shard = -1;                 // first corrupted shard, when any
};

// Per-shard BFT tolerance: floor((n_x - 1) / 3).
int f_intra(int n_x);

// Network-wide tolerance: floor((floor(n/d) - 1) / 3) * d.
int f_total(int n, int d);

// Algo-1 trigger decision. The report is always fully populated: every shard
// is classified even after an early trigger condition is met.
RiskReport evaluate_risk(const GlobalTrustTable& g, const ValidatedAssignment& a,
                         const TxStats& stats, const TrustConfig& trust_cfg,
                         const RiskConfig& risk_cfg);

}  // namespace tbdd

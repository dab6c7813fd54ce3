#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/reward.hpp"
#include "tbdd/risk.hpp"
#include "tbdd/txmatrix.hpp"

namespace tbdd {

// One per-episode metric record, as emitted by the environment.
struct EpisodeRow {
  int episode = 0;
  std::string strategy;
  int h = 0;
  uint64_t seed = 0;
  RewardBreakdown reward;
  double cst_ratio = 0.0;
  int corrupted_count = 0;
  int d_shards = 0;
  double throughput = 0.0;
  TriggerReason reason = TriggerReason::none;
  std::string note;            // repair / fallback / failure annotations
  std::vector<double> gtt;
};

// Model-derived throughput stand-in: corrupted shards process nothing and
// kill their incident CSTs; surviving CSTs cost cst_cost shard slots each.
double episode_throughput(const ShardTxProfile& profile,
                          const std::vector<bool>& corrupted,
                          const ThroughputConfig& model);

struct RunMetrics {
  std::vector<EpisodeRow> rows;
  double mean_reward = 0.0;
  double mean_cst_ratio = 0.0;
  double mean_psi = 0.0;
  double mean_omega_in = 0.0;
  double mean_omega_cr = 0.0;
  double mean_throughput = 0.0;
  double corrupted_shard_ratio = 0.0;  // over the last `window` episodes
  int window = 0;
};

RunMetrics aggregate_run(std::vector<EpisodeRow> rows, int window);

// Ratio of mean episode throughput between a dishonest run and its h = 0
// twin (same seed and remaining config).
Result<double> normalized_throughput(const RunMetrics& run_h, const RunMetrics& run_0);

// Fraction of (episode x shard) cells flagged corrupted over the last
// `window` rows.
Result<double> corrupted_shard_ratio(const std::vector<EpisodeRow>& rows, int window);

}  // namespace tbdd

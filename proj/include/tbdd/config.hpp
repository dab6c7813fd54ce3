#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tbdd/common.hpp"

namespace tbdd {

struct NetworkConfig {
  int n_total = 16;
  int d_shards = 2;
  int n_min = 4;
  int leads_per_episode = 8;
  uint64_t seed = 1;
};

struct AttackConfig {
  int h_dishonest = 0;
  double fail_prob = 0.2;       // F: vote lost to the network
  double tau = 0.1;             // hiding threshold on the shard dishonest fraction
  double kappa = 1.0;           // P(vote against an honest leader) while colluding
  double w_g = 1.0;
  double w_u = 1.0;
};

struct TrustConfig {
  double alpha = 0.3125;        // indirect feedback weight
  double beta = 0.5625;         // direct feedback weight
  double mu = 0.125;            // previous-episode global trust weight
  double gamma = 0.9;           // indirect-feedback discount
  double rho_t = 0.67;          // high-risk trust threshold
  double bootstrap = 1.0;       // episode-0 global trust for every node
};

struct RiskConfig {
  double rho_cr = 0.4;          // CST-ratio resharding trigger
};

struct TxGenConfig {
  double base_mean = 2.0;
  double base_sd = 6.0;
  double collusion_boost = 5.0;
  bool resample_each_episode = true;
};

struct RewardConfig {
  double e_a = 1.0;
  double e_b = 1.0;
  double lambda_a = 4.0;
  double lambda_b = 0.9;
  double lambda_c = 5.0;
  int balance_slack = 1;        // max shard-size spread still counted as balanced
};

struct DqnConfig {
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_steps = 600;
  int replay_capacity = 2048;
  int batch_size = 64;
  double learning_rate = 5e-3;
  double momentum = 0.0;
  int target_sync_period = 10;  // in updates
  int epochs = 40;              // e_max
  int samples_per_epoch = 16;
  int updates_per_epoch = 8;
  int hidden_units = 64;
};

struct PpoConfig {
  double clip_ratio = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  int minibatches = 4;
  int update_epochs = 4;
  double learning_rate = 3e-3;
  double momentum = 0.0;
  int rollout_batch = 64;
  int epochs = 40;              // e_max
  int hidden_units = 64;
};

struct ThroughputConfig {
  double cst_cost = 2.0;        // shard slots one CST consumes
};

// Everything a single run needs. Plain aggregate; `validate` is the gate the
// file loader and CLI apply before use.
struct SimConfig {
  NetworkConfig network;
  AttackConfig attack;
  TrustConfig trust;
  RiskConfig risk;
  TxGenConfig txgen;
  RewardConfig reward;
  DqnConfig dqn;
  PpoConfig ppo;
  ThroughputConfig throughput;
  int community_sweeps = 10;    // KL improvement sweeps for the community baseline
};

// Field-specific messages, e.g. "trust.alpha: alpha+beta+mu must sum to 1".
std::vector<std::string> validate(const SimConfig& cfg);

// Key/value file with [section] headers; '#' starts a comment. Unknown keys
// are rejected. Returns the parsed config or the first error, and runs
// `validate` on the result.
Result<SimConfig> load_config_file(const std::string& path);
Result<SimConfig> parse_config_text(const std::string& text);

// Overrides in "section.key=value" form (CLI flags and TBDD_* environment
// variables are both funneled through this).
Result<SimConfig> apply_overrides(SimConfig cfg,
                                  const std::map<std::string, std::string>& kv);

// Effective config in the same format `load_config_file` reads.
std::string dump_config(const SimConfig& cfg);

// Every recognized "section.key" name (for env-var mapping and docs).
std::vector<std::string> config_keys();

}  // namespace tbdd

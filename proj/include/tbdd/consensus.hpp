#pragma once

#include <cstdint>
#include <vector>

#include "tbdd/assignment.hpp"
#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/rng.hpp"

namespace tbdd {

// Missing = the network-failure draw fired (probability F); Invalid = the
// validator voted and rejected the block.
enum class VoteOutcome : uint8_t { valid, invalid, missing };

// One shard's leader schedule and outcome grid for an episode.
struct ShardBvt {
  int shard = 0;
  std::vector<int> members;                      // ascending node ids
  std::vector<int> schedule;                     // round -> leader node id
  std::vector<std::vector<VoteOutcome>> votes;   // [round][member index]
};

// Per-shard, per-episode record of every validator's vote for every leader
// round, with the derived counters the trust engine consumes.
class BlockVerificationTable {
 public:
  BlockVerificationTable() = default;
  BlockVerificationTable(int n, std::vector<ShardBvt> shards);

  int n() const { return n_; }
  const std::vector<ShardBvt>& shards() const { return shards_; }

  // iota_j: rounds node j led this episode.
  int leads(int node) const { return leads_[static_cast<size_t>(node)]; }
  // v_{i,j}: valid votes node i cast across leader j's rounds.
  int valid_votes(int voter, int leader) const {
    return valid_[index(voter, leader)];
  }
  // delta_{p,j}: fraction of leader j's rounds where p's vote arrived.
  double nonempty_ratio(int voter, int leader) const;

  int shard_of(int node) const { return shard_of_[static_cast<size_t>(node)]; }
  int shard_size_of(int node) const;
  const std::vector<int>& shard_members_of(int node) const;

 private:
  size_t index(int voter, int leader) const {
    return static_cast<size_t>(voter) * static_cast<size_t>(n_) +
           static_cast<size_t>(leader);
  }
  int n_ = 0;
  std::vector<ShardBvt> shards_;
  std::vector<int> leads_;
  std::vector<int> valid_;      // [voter][leader]
  std::vector<int> nonempty_;   // [voter][leader]
  std::vector<int> shard_of_;
};

struct NormalizedTrust {
  std::vector<double> g;  // per node, in [0,1]
};

// Min-max normalization of the previous episode's global trust (all-equal
// input maps to all ones).
Result<NormalizedTrust> normalize_trust(const std::vector<double>& g_prev);

// Probability that `voter` casts a valid vote for `leader`, before the
// missing-vote channel is separated out. `u` is the block-match bit the voter
// observes; `shard_dishonest_fraction` is A for the voter's shard.
double vote_probability(const NodeProfile& voter, const NodeProfile& leader,
                        double leader_norm_trust, int u,
                        double shard_dishonest_fraction, const AttackConfig& atk);

// Simulates every shard's leader rounds for one episode. Leader schedule is
// round-robin over ascending member ids, repeated leads_per_episode times;
// leaders always self-vote valid. Splits one vote stream per shard off `rng`.
BlockVerificationTable run_episode_votes(const ValidatedAssignment& a,
                                         const std::vector<NodeProfile>& profiles,
                                         const NormalizedTrust& g_norm,
                                         const AttackConfig& atk,
                                         const NetworkConfig& net,
                                         const DeterministicRng& rng);

}  // namespace tbdd

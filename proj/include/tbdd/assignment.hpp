#pragma once

#include <vector>

#include "tbdd/common.hpp"
#include "tbdd/config.hpp"

namespace tbdd {

// Raw allocation proposal: shard_of[i] is the shard node i would live in.
// May violate the minimum-size constraint; validation produces the checked
// form below.
struct ShardAssignment {
  std::vector<int> shard_of;

  int n() const { return static_cast<int>(shard_of.size()); }
  bool operator==(const ShardAssignment&) const = default;
};

// An assignment that passed validate_assignment: every shard has at least
// n_min members. Carries the per-shard member lists.
class ValidatedAssignment {
 public:
  const std::vector<int>& shard_of() const { return shard_of_; }
  const std::vector<std::vector<int>>& members() const { return members_; }
  const std::vector<int>& shard_members(int shard) const {
    return members_[static_cast<size_t>(shard)];
  }
  int shard_of_node(int node) const { return shard_of_[static_cast<size_t>(node)]; }
  int n() const { return static_cast<int>(shard_of_.size()); }
  int d() const { return static_cast<int>(members_.size()); }
  ShardAssignment raw() const { return ShardAssignment{shard_of_}; }

  bool operator==(const ValidatedAssignment&) const = default;

 private:
  friend Result<ValidatedAssignment> validate_assignment(const ShardAssignment&,
                                                         const NetworkConfig&);
  std::vector<int> shard_of_;
  std::vector<std::vector<int>> members_;
};

// Ok iff the proposal has length n_total, entries in [0, d_shards), and every
// shard holds >= n_min members.
Result<ValidatedAssignment> validate_assignment(const ShardAssignment& a,
                                                const NetworkConfig& cfg);

enum class Honesty { honest, dishonest };

struct NodeProfile {
  int id = 0;
  Honesty honesty = Honesty::honest;
};

// h_dishonest profiles are dishonest. `scattered` places them by a seeded
// draw (the paper's initial condition); otherwise they occupy ids [0, h).
std::vector<NodeProfile> make_profiles(const NetworkConfig& net, const AttackConfig& atk,
                                       bool scattered = true);

}  // namespace tbdd

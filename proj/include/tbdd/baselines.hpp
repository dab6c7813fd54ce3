#pragma once

#include "tbdd/strategy.hpp"

namespace tbdd {

// Uniformly random permutation dealt round-robin into D shards (sizes differ
// by at most one).
class RandomStrategy : public ReshardingStrategy {
 public:
  std::string name() const override { return "random"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                  std::string* note) override;
};

// Kernighan-Lin refinement of a balanced random split on the transaction
// graph; D > 2 via recursive bisection. Accepts only cut-reducing swaps, so
// the result's CST never exceeds the initial split's.
class CommunityStrategy : public ReshardingStrategy {
 public:
  explicit CommunityStrategy(int sweeps = 10) : sweeps_(sweeps) {}
  std::string name() const override { return "community"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                  std::string* note) override;

 private:
  int sweeps_;
};

// Sorts nodes by global trust (descending, ties by id) and deals them in
// serpentine order, interleaving the trust spectrum across shards.
class TrustStrategy : public ReshardingStrategy {
 public:
  std::string name() const override { return "trust"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                  std::string* note) override;
};

// The serpentine deal itself, exposed for direct testing: ranks[k] is the
// node id holding sorted rank k.
ShardAssignment serpentine_deal(const std::vector<int>& ranks, int n, int d);

}  // namespace tbdd

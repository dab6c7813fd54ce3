#pragma once

#include <string>
#include <vector>

#include "tbdd/assignment.hpp"
#include "tbdd/common.hpp"
#include "tbdd/consensus.hpp"
#include "tbdd/rng.hpp"
#include "tbdd/trust.hpp"
#include "tbdd/txmatrix.hpp"

namespace tbdd {

// Frozen view of the network a resharding decision is made against. Copies
// are cheap at the scales this simulator targets, and immutability is what
// makes virtual resharding trials safe to run in parallel.
struct Snapshot {
  NormalizedTrust g_norm;
  GlobalTrustTable gtt;
  TransactionMatrix tx;
  ValidatedAssignment assignment;
  std::vector<NodeProfile> profiles;
  int episode = 0;
};

class ReshardingStrategy {
 public:
  virtual ~ReshardingStrategy() = default;
  virtual std::string name() const = 0;
  // Returns a raw proposal for the next episode's allocation. `note`, when
  // non-null, receives repair/fallback annotations for the metrics stream.
  virtual Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng& rng,
                                          std::string* note) = 0;
};

}  // namespace tbdd

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tbdd/assignment.hpp"
#include "tbdd/config.hpp"
#include "tbdd/consensus.hpp"
#include "tbdd/txmatrix.hpp"

namespace tbdd::testing {

inline NetworkConfig net(int n, int d, int n_min = 4, int leads = 1, uint64_t seed = 1) {
  NetworkConfig cfg;
  cfg.n_total = n;
  cfg.d_shards = d;
  cfg.n_min = n_min;
  cfg.leads_per_episode = leads;
  cfg.seed = seed;
  return cfg;
}

inline ValidatedAssignment valid(const std::vector<int>& shard_of, const NetworkConfig& cfg) {
  auto r = validate_assignment(ShardAssignment{shard_of}, cfg);
  if (!r) throw std::runtime_error("test assignment invalid: " + r.error().message);
  return r.value();
}

inline std::vector<NodeProfile> honest_profiles(int n) {
  std::vector<NodeProfile> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)].id = i;
  return p;
}

// First `h` node ids dishonest.
inline std::vector<NodeProfile> leading_dishonest(int n, int h) {
  auto p = honest_profiles(n);
  for (int i = 0; i < h; ++i) p[static_cast<size_t>(i)].honesty = Honesty::dishonest;
  return p;
}

// Independent oracle for the CST count: direct pair loop over endpoints.
inline int64_t brute_force_cst(const TransactionMatrix& phi, const ValidatedAssignment& a) {
  int64_t cst = 0;
  for (int i = 0; i < phi.n(); ++i)
    for (int j = i + 1; j < phi.n(); ++j)
      if (a.shard_of_node(i) != a.shard_of_node(j)) cst += phi.at(i, j);
  return cst;
}

inline int64_t brute_force_ist(const TransactionMatrix& phi, const ValidatedAssignment& a) {
  int64_t ist = 0;
  for (int i = 0; i < phi.n(); ++i)
    for (int j = i + 1; j < phi.n(); ++j)
      if (a.shard_of_node(i) == a.shard_of_node(j)) ist += phi.at(i, j);
  return ist;
}

inline NormalizedTrust ones_trust(int n) {
  return NormalizedTrust{std::vector<double>(static_cast<size_t>(n), 1.0)};
}

}  // namespace tbdd::testing

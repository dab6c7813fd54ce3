#include "tbdd/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace tbdd {
namespace {

ShardAssignment deal_round_robin(const std::vector<int>& order, int n, int d) {
  ShardAssignment a;
  a.shard_of.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    a.shard_of[static_cast<size_t>(order[static_cast<size_t>(k)])] = k % d;
  return a;
}

// Cut weight between two node sets under the transaction graph.
double cut_weight(const TransactionMatrix& tx, const std::vector<int>& side_of,
                  const std::vector<int>& nodes) {
  double cut = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (side_of[nodes[i]] != side_of[nodes[j]])
        cut += static_cast<double>(tx.at(nodes[i], nodes[j]));
  return cut;
}

// One KL pass over `nodes`: greedy positive-gain pair swaps with locking.
// side_of entries are 0/1 for members of `nodes`. Returns true if any swap
// was applied.
bool kl_sweep(const TransactionMatrix& tx, const std::vector<int>& nodes,
              std::vector<int>& side_of) {
  std::vector<char> locked(side_of.size(), 0);
  bool any = false;
  for (;;) {
    // D_v = external - internal connectivity for unlocked vertices.
    std::vector<double> dval(side_of.size(), 0.0);
    for (int v : nodes) {
      if (locked[static_cast<size_t>(v)]) continue;
      double ext = 0.0, internal = 0.0;
      for (int u : nodes) {
        if (u == v) continue;
        auto w = static_cast<double>(tx.at(v, u));
        if (side_of[static_cast<size_t>(u)] == side_of[static_cast<size_t>(v)])
          internal += w;
        else
          ext += w;
      }
      dval[static_cast<size_t>(v)] = ext - internal;
    }
    double best_gain = 0.0;
    int best_a = -1, best_b = -1;
    for (int a : nodes) {
      if (locked[static_cast<size_t>(a)] || side_of[static_cast<size_t>(a)] != 0) continue;
      for (int b : nodes) {
        if (locked[static_cast<size_t>(b)] || side_of[static_cast<size_t>(b)] != 1) continue;
        double gain = dval[static_cast<size_t>(a)] + dval[static_cast<size_t>(b)] -
                      2.0 * static_cast<double>(tx.at(a, b));
        if (gain > best_gain) {
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a < 0) break;
    side_of[static_cast<size_t>(best_a)] = 1;
    side_of[static_cast<size_t>(best_b)] = 0;
    locked[static_cast<size_t>(best_a)] = 1;
    locked[static_cast<size_t>(best_b)] = 1;
    any = true;
  }
  return any;
}

// Recursive bisection: shards [shard_lo, shard_hi) over `nodes`, writing the
// final shard ids into `out`. Shard target sizes follow the balanced deal.
void bisect(const TransactionMatrix& tx, const std::vector<int>& nodes,
            const std::vector<int>& shard_sizes, int shard_lo, int shard_hi,
            DeterministicRng& rng, int sweeps, std::vector<int>& out) {
  if (shard_hi - shard_lo == 1) {
    for (int v : nodes) out[static_cast<size_t>(v)] = shard_lo;
    return;
  }
  int shard_mid = shard_lo + (shard_hi - shard_lo) / 2;
  size_t left_target = 0;
  for (int x = shard_lo; x < shard_mid; ++x)
    left_target += static_cast<size_t>(shard_sizes[static_cast<size_t>(x)]);

  // Balanced random initialization, then KL refinement.
  std::vector<int> shuffled = nodes;
  for (size_t i = shuffled.size(); i > 1; --i) {
    auto j = static_cast<size_t>(rng.uniform_below(i));
    std::swap(shuffled[i - 1], shuffled[j]);
  }
  std::vector<int> side_of(static_cast<size_t>(tx.n()), -1);
  for (size_t k = 0; k < shuffled.size(); ++k)
    side_of[static_cast<size_t>(shuffled[k])] = k < left_target ? 0 : 1;

  std::vector<int> init_side = side_of;
  double init_cut = cut_weight(tx, side_of, nodes);
  for (int s = 0; s < sweeps; ++s)
    if (!kl_sweep(tx, nodes, side_of)) break;
  // Positive-gain swaps can only shrink the cut; keep the contract explicit.
  if (cut_weight(tx, side_of, nodes) > init_cut) side_of = init_side;

  std::vector<int> left, right;
  for (int v : nodes)
    (side_of[static_cast<size_t>(v)] == 0 ? left : right).push_back(v);
  bisect(tx, left, shard_sizes, shard_lo, shard_mid, rng, sweeps, out);
  bisect(tx, right, shard_sizes, shard_mid, shard_hi, rng, sweeps, out);
}

}  // namespace

Result<ShardAssignment> RandomStrategy::propose(const Snapshot& snap, DeterministicRng& rng,
                                                std::string*) {
  int n = snap.assignment.n();
  int d = snap.assignment.d();
  return deal_round_robin(rng.permutation(n), n, d);
}

Result<ShardAssignment> CommunityStrategy::propose(const Snapshot& snap,
                                                   DeterministicRng& rng, std::string*) {
  int n = snap.assignment.n();
  int d = snap.assignment.d();
  std::vector<int> shard_sizes(static_cast<size_t>(d), n / d);
  for (int x = 0; x < n % d; ++x) ++shard_sizes[static_cast<size_t>(x)];

  std::vector<int> nodes(static_cast<size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<int> out(static_cast<size_t>(n), 0);
  bisect(snap.tx, nodes, shard_sizes, 0, d, rng, sweeps_, out);
  return ShardAssignment{out};
}

Result<ShardAssignment> TrustStrategy::propose(const Snapshot& snap, DeterministicRng&,
                                               std::string*) {
  int n = snap.assignment.n();
  int d = snap.assignment.d();
  std::vector<int> ranks(static_cast<size_t>(n));
  std::iota(ranks.begin(), ranks.end(), 0);
  const auto& g = snap.gtt.g;
  std::stable_sort(ranks.begin(), ranks.end(), [&g](int a, int b) {
    if (g[static_cast<size_t>(a)] != g[static_cast<size_t>(b)])
      return g[static_cast<size_t>(a)] > g[static_cast<size_t>(b)];
    return a < b;
  });
  return serpentine_deal(ranks, n, d);
}

ShardAssignment serpentine_deal(const std::vector<int>& ranks, int n, int d) {
  ShardAssignment a;
  a.shard_of.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    int block = k / d;
    int offset = k % d;
    int shard = (block % 2 == 0) ? offset : d - 1 - offset;
    a.shard_of[static_cast<size_t>(ranks[static_cast<size_t>(k)])] = shard;
  }
  return a;
}

}  // namespace tbdd

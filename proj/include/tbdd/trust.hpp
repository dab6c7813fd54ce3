#pragma once

#include <vector>

#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/consensus.hpp"

namespace tbdd {

// Pairwise trust sent from node i about node j, for one episode.
class LocalTrustTable {
 public:
  LocalTrustTable() = default;
  LocalTrustTable(int n, int episode)
      : n_(n), episode_(episode), l_(static_cast<size_t>(n) * n, 0.0) {}

  int n() const { return n_; }
  int episode() const { return episode_; }
  double at(int i, int j) const { return l_[index(i, j)]; }
  void set(int i, int j, double v) { l_[index(i, j)] = v; }
  std::vector<double> row(int i) const;

 private:
  size_t index(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j);
  }
  int n_ = 0;
  int episode_ = 0;
  std::vector<double> l_;
};

// Per-node global trust for one episode, plus the per-episode history this
// run has produced so far.
struct GlobalTrustTable {
  std::vector<double> g;
  int episode = 0;
  std::vector<std::vector<double>> history;  // episodes 0..episode-1

  // Episode-0 bootstrap at a uniform trust level.
  static GlobalTrustTable initial(int n, double level = 1.0) {
    return GlobalTrustTable{std::vector<double>(static_cast<size_t>(n), level), 0, {}};
  }
};

// V_j: fraction of cast-able votes across j's leadership rounds that came
// back valid (self-votes included).
Result<double> leader_pass_ratio(const BlockVerificationTable& bvt, int j);

// F_{i,j}: discounted pass ratio of leader j plus the discounted, weighted
// testimony of the other shard members. Falls back to gamma*V_j when the
// shard has no third parties. Can exceed 1; callers clamp when mixing.
Result<double> indirect_feedback(const BlockVerificationTable& bvt, int i, int j,
                                 const TrustConfig& cfg);

// F_hat_{i,j}: fraction of i's leadership rounds where j voted valid.
Result<double> direct_feedback(const BlockVerificationTable& bvt, int i, int j);

// Assembles the full LTT: same-shard entries mix clamped indirect feedback,
// direct feedback, and the scored node's previous global trust; cross-shard
// entries carry the previous global trust alone.
Result<LocalTrustTable> build_ltt(const BlockVerificationTable& bvt,
                                  const GlobalTrustTable& g_prev,
                                  const TrustConfig& cfg);

// Cosine similarity between LTT rows i and j; a zero row compares as 0.
double row_similarity(const LocalTrustTable& l, int i, int j);

// G_i = mean over j (including i) of cos(row_i, row_j).
GlobalTrustTable build_gtt(const LocalTrustTable& l, const GlobalTrustTable& g_prev);

// Cosine of rows i and j restricted to the columns in `columns`.
double row_similarity_on(const LocalTrustTable& l, int i, int j,
                         const std::vector<int>& columns);

// Shard-scoped aggregation: G_i is the mean similarity between i's scoring
// behavior and its shardmates', compared on their shard's columns only.
// Cross-shard entries are copied priors rather than scoring behavior, so the
// whole-table mean lets them mask disagreement; this variant is what the
// episode loop uses to make the high-risk threshold discriminating.
GlobalTrustTable build_gtt_shard_scoped(const LocalTrustTable& l,
                                        const ValidatedAssignment& a,
                                        const GlobalTrustTable& g_prev);

}  // namespace tbdd

#include "tbdd/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tbdd {

BlockVerificationTable::BlockVerificationTable(int n, std::vector<ShardBvt> shards)
    : n_(n), shards_(std::move(shards)) {
  leads_.assign(static_cast<size_t>(n), 0);
  valid_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  nonempty_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  shard_of_.assign(static_cast<size_t>(n), -1);
  for (const auto& sb : shards_) {
    for (int m : sb.members) shard_of_[static_cast<size_t>(m)] = sb.shard;
    for (size_t r = 0; r < sb.schedule.size(); ++r) {
      int leader = sb.schedule[r];
      ++leads_[static_cast<size_t>(leader)];
      for (size_t k = 0; k < sb.members.size(); ++k) {
        int voter = sb.members[k];
        VoteOutcome out = sb.votes[r][k];
        if (out != VoteOutcome::missing) ++nonempty_[index(voter, leader)];
        if (out == VoteOutcome::valid) ++valid_[index(voter, leader)];
      }
    }
  }
}

double BlockVerificationTable::nonempty_ratio(int voter, int leader) const {
  int iota = leads_[static_cast<size_t>(leader)];
  if (iota == 0) return 0.0;
  return static_cast<double>(nonempty_[index(voter, leader)]) / iota;
}

int BlockVerificationTable::shard_size_of(int node) const {
  return static_cast<int>(shard_members_of(node).size());
}

const std::vector<int>& BlockVerificationTable::shard_members_of(int node) const {
  return shards_[static_cast<size_t>(shard_of(node))].members;
}

Result<NormalizedTrust> normalize_trust(const std::vector<double>& g_prev) {
  NormalizedTrust out;
  out.g.resize(g_prev.size());
  double lo = g_prev.empty() ? 0.0 : g_prev.front();
  double hi = lo;
  for (double v : g_prev) {
    if (!std::isfinite(v))
      return make_error(Errc::non_finite_trust, "non-finite global trust value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) {
    std::fill(out.g.begin(), out.g.end(), 1.0);
    return out;
  }
  for (size_t i = 0; i < g_prev.size(); ++i) out.g[i] = (g_prev[i] - lo) / (hi - lo);
  return out;
}

double vote_probability(const NodeProfile& voter, const NodeProfile& leader,
                        double leader_norm_trust, int u,
                        double shard_dishonest_fraction, const AttackConfig& atk) {
  double honest_p =
      (1.0 - atk.fail_prob) * atk.w_g * leader_norm_trust * atk.w_u * static_cast<double>(u);
  if (voter.honesty == Honesty::honest) return honest_p;
  if (shard_dishonest_fraction < atk.tau) return honest_p;  // hiding
  double collusion =
      leader.honesty == Honesty::dishonest ? 1.0 : 1.0 - atk.kappa;
  return (1.0 - atk.fail_prob) * collusion;
}

BlockVerificationTable run_episode_votes(const ValidatedAssignment& a,
                                         const std::vector<NodeProfile>& profiles,
                                         const NormalizedTrust& g_norm,
                                         const AttackConfig& atk,
                                         const NetworkConfig& net,
                                         const DeterministicRng& rng) {
  std::vector<ShardBvt> shard_tables;
  shard_tables.reserve(static_cast<size_t>(a.d()));

  for (int x = 0; x < a.d(); ++x) {
    const auto& members = a.shard_members(x);
    auto n_x = static_cast<int>(members.size());
    int dishonest_count = 0;
    for (int m : members)
      if (profiles[static_cast<size_t>(m)].honesty == Honesty::dishonest)
        ++dishonest_count;
    double fraction_a = n_x > 0 ? static_cast<double>(dishonest_count) / n_x : 0.0;
    bool colluding_shard = fraction_a >= atk.tau && dishonest_count > 0;

    ShardBvt sb;
    sb.shard = x;
    sb.members = members;  // already ascending
    auto shard_rng = rng.split("shard-" + std::to_string(x));

    int rounds = n_x * net.leads_per_episode;
    sb.schedule.resize(static_cast<size_t>(rounds));
    sb.votes.assign(static_cast<size_t>(rounds),
                    std::vector<VoteOutcome>(static_cast<size_t>(n_x)));

    for (int r = 0; r < rounds; ++r) {
      int leader = members[static_cast<size_t>(r % n_x)];
      sb.schedule[static_cast<size_t>(r)] = leader;
      const auto& leader_prof = profiles[static_cast<size_t>(leader)];
      // Colluding dishonest leaders propose blocks that mismatch honest
      // validators' local version; hiding ones propose valid blocks.
      bool invalid_block =
          leader_prof.honesty == Honesty::dishonest && colluding_shard;

      for (int k = 0; k < n_x; ++k) {
        int voter = members[static_cast<size_t>(k)];
        if (voter == leader) {
          sb.votes[static_cast<size_t>(r)][static_cast<size_t>(k)] = VoteOutcome::valid;
          continue;
        }
        const auto& voter_prof = profiles[static_cast<size_t>(voter)];
        int u = invalid_block && voter_prof.honesty == Honesty::honest ? 0 : 1;
        double p = vote_probability(voter_prof, leader_prof,
                                    g_norm.g[static_cast<size_t>(leader)], u,
                                    fraction_a, atk);
        // Two draws per ballot regardless of branch, to keep stream
        // consumption independent of outcomes.
        double miss_draw = shard_rng.uniform01();
        double vote_draw = shard_rng.uniform01();
        VoteOutcome out;
        if (miss_draw < atk.fail_prob) {
          out = VoteOutcome::missing;
        } else {
          double cond = atk.fail_prob < 1.0 ? p / (1.0 - atk.fail_prob) : 0.0;
          out = vote_draw < cond ? VoteOutcome::valid : VoteOutcome::invalid;
        }
        sb.votes[static_cast<size_t>(r)][static_cast<size_t>(k)] = out;
      }
    }
    shard_tables.push_back(std::move(sb));
  }
  return BlockVerificationTable(a.n(), std::move(shard_tables));
}

}  // namespace tbdd

#include "tbdd/environment.hpp"

#include <stdexcept>
#include <string>

namespace tbdd {

ShardAssignment Environment::block_assignment(const NetworkConfig& net) {
  ShardAssignment a;
  a.shard_of.resize(static_cast<size_t>(net.n_total));
  int base = net.n_total / net.d_shards;
  int rem = net.n_total % net.d_shards;
  int node = 0;
  for (int x = 0; x < net.d_shards; ++x) {
    int size = base + (x < rem ? 1 : 0);
    for (int k = 0; k < size; ++k) a.shard_of[static_cast<size_t>(node++)] = x;
  }
  return a;
}

Environment::Environment(SimConfig cfg, std::string strategy_label,
                         std::optional<ShardAssignment> initial,
                         std::optional<std::vector<NodeProfile>> profiles,
                         std::optional<TransactionMatrix> initial_tx)
    : cfg_(std::move(cfg)), strategy_label_(std::move(strategy_label)) {
  profiles_ = profiles ? std::move(*profiles) : make_profiles(cfg_.network, cfg_.attack);
  auto start = initial ? std::move(*initial) : block_assignment(cfg_.network);
  auto validated = validate_assignment(start, cfg_.network);
  if (!validated) throw std::invalid_argument("initial assignment: " + validated.error().message);
  state_.assignment = std::move(validated.value());
  state_.trust.gtt = GlobalTrustTable::initial(cfg_.network.n_total, cfg_.trust.bootstrap);
  state_.trust.g_norm.g.assign(static_cast<size_t>(cfg_.network.n_total), 1.0);
  state_.tx = initial_tx ? std::move(*initial_tx) : sample_tx(0);
  if (state_.tx.n() != cfg_.network.n_total)
    throw std::invalid_argument("initial transaction matrix dimension mismatch");
}

TransactionMatrix Environment::sample_tx(int episode) const {
  DeterministicRng rng(cfg_.network.seed, "txgen/ep-" + std::to_string(episode));
  return generate_tx_matrix(cfg_.network, profiles_, cfg_.txgen, rng);
}

Snapshot Environment::snapshot() const {
  return Snapshot{state_.trust.g_norm, state_.trust.gtt, state_.tx,
                  state_.assignment,   profiles_,        state_.episode};
}

RewardBreakdown Environment::virtual_reward(const Snapshot& snap,
                                            const ShardAssignment& proposal) const {
  return tbdd::virtual_reward(snap, proposal, cfg_);
}

RewardBreakdown virtual_reward(const Snapshot& snap, const ShardAssignment& proposal,
                               const SimConfig& cfg) {
  RewardInputs in{&snap.gtt, &snap.tx, &snap.assignment};
  auto r = total_reward(in, proposal, cfg.network, cfg.trust, cfg.risk, cfg.reward);
  if (!r) return violation_penalty(cfg.reward);
  return r.value();
}

std::vector<double> Environment::encode_state(const Snapshot& snap) {
  int n = snap.assignment.n();
  int d = snap.assignment.d();
  std::vector<double> features;
  features.reserve(static_cast<size_t>(n) * (2 * static_cast<size_t>(d) + 1));
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < d; ++x)
      features.push_back(snap.assignment.shard_of_node(i) == x ? 1.0 : 0.0);
    features.push_back(snap.g_norm.g[static_cast<size_t>(i)]);
    std::vector<double> volume(static_cast<size_t>(d), 0.0);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      auto w = static_cast<double>(snap.tx.at(i, j));
      volume[static_cast<size_t>(snap.assignment.shard_of_node(j))] += w;
      total += w;
    }
    for (int x = 0; x < d; ++x)
      features.push_back(total > 0.0 ? volume[static_cast<size_t>(x)] / total : 1.0 / d);
  }
  return features;
}

Result<EpisodeRow> Environment::step_episode(ReshardingStrategy& strategy) {
  int episode = state_.episode;  // the episode being simulated now

  // Step-1: consensus rounds on the current allocation, then trust update.
  // The working trust scale is the normalized one (the same scale the vote
  // model consumes): the prior fed into the LTT is G^{eps-1}, so nodes whose
  // trust collapsed stop propping up every row's similarity.
  auto norm = normalize_trust(state_.trust.gtt.g);
  if (!norm) return norm.error();
  state_.trust.g_norm = std::move(norm.value());

  DeterministicRng vote_rng(cfg_.network.seed, "votes/ep-" + std::to_string(episode));
  auto bvt = run_episode_votes(state_.assignment, profiles_, state_.trust.g_norm,
                               cfg_.attack, cfg_.network, vote_rng);

  GlobalTrustTable prior = state_.trust.gtt;
  prior.g = state_.trust.g_norm.g;
  auto ltt = build_ltt(bvt, prior, cfg_.trust);
  if (!ltt) return ltt.error();
  state_.trust.ltt = std::move(ltt.value());
  state_.trust.gtt =
      build_gtt_shard_scoped(state_.trust.ltt, state_.assignment, state_.trust.gtt);
  state_.last_bvt = std::move(bvt);

  // Risk check against what this episode actually experienced.
  auto stats = cst_stats(state_.tx, state_.assignment);
  if (!stats) return stats.error();
  state_.last_report =
      evaluate_risk(state_.trust.gtt, state_.assignment, stats.value(), cfg_.trust, cfg_.risk);

  // Step-2/3: reshard when triggered; strategy failures keep the allocation.
  ValidatedAssignment applied = state_.assignment;
  RewardBreakdown breakdown;
  std::string note;
  bool penalty = false;
  if (state_.last_report.trigger == Trigger::trigger) {
    ++strategy_calls_;
    auto snap = snapshot();
    // Normalize against the just-updated trust table for the decision.
    auto snap_norm = normalize_trust(snap.gtt.g);
    if (snap_norm) snap.g_norm = snap_norm.value();
    DeterministicRng strat_rng(cfg_.network.seed, "strategy/ep-" + std::to_string(episode));
    auto proposal = strategy.propose(snap, strat_rng, &note);
    if (proposal) {
      auto validated = validate_assignment(proposal.value(), cfg_.network);
      if (validated) {
        applied = std::move(validated.value());
      } else {
        penalty = true;
        note = note.empty() ? "invalid_proposal_kept_previous"
                            : note + "|invalid_proposal_kept_previous";
      }
    } else {
      note = note.empty() ? "strategy_failed_kept_previous"
                          : note + "|strategy_failed_kept_previous";
    }
  }

  if (penalty) {
    breakdown = violation_penalty(cfg_.reward);
  } else {
    RewardInputs in{&state_.trust.gtt, &state_.tx, &state_.assignment};
    auto r = total_reward(in, applied.raw(), cfg_.network, cfg_.trust, cfg_.risk, cfg_.reward);
    if (!r) return r.error();
    breakdown = r.value();
  }

  // Step-4: metrics. Throughput reflects the allocation the episode ran
  // under; reward and cst_ratio score the applied allocation.
  auto profile = shard_tx_profile(state_.tx, state_.assignment);
  if (!profile) return profile.error();
  std::vector<bool> corrupted(state_.last_report.corrupted.begin(),
                              state_.last_report.corrupted.end());
  double throughput = episode_throughput(profile.value(), corrupted, cfg_.throughput);

  auto applied_stats = cst_stats(state_.tx, applied);
  if (!applied_stats) return applied_stats.error();

  EpisodeRow row;
  row.episode = episode + 1;
  row.strategy = strategy_label_;
  row.h = cfg_.attack.h_dishonest;
  row.seed = cfg_.network.seed;
  row.reward = breakdown;
  row.cst_ratio = applied_stats.value().cst_ratio;
  row.corrupted_count = state_.last_report.corrupted_count;
  row.d_shards = cfg_.network.d_shards;
  row.throughput = throughput;
  row.reason = state_.last_report.reason;
  row.note = note;
  row.gtt = state_.trust.gtt.g;

  state_.assignment = std::move(applied);
  state_.episode = episode + 1;
  if (cfg_.txgen.resample_each_episode) state_.tx = sample_tx(state_.episode);
  state_.metrics_row = row;
  return row;
}

}  // namespace tbdd

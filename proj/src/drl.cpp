#include "tbdd/drl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tbdd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Sample {
  std::vector<int> action;  // per-node shard choice
  double reward = 0.0;
  double logp_old = 0.0;    // PPO only
};

std::vector<int> decode_counts(const std::vector<int>& action, int d) {
  std::vector<int> counts(static_cast<size_t>(d), 0);
  for (int s : action) ++counts[static_cast<size_t>(s)];
  return counts;
}

bool action_valid(const std::vector<int>& action, const NetworkConfig& net) {
  auto counts = decode_counts(action, net.d_shards);
  for (int c : counts)
    if (c < net.n_min) return false;
  return true;
}

ShardAssignment to_assignment(const std::vector<int>& action) {
  return ShardAssignment{action};
}

// Tracks the best valid proposal sampled so far.
struct BestSeen {
  ShardAssignment proposal;
  double reward = kNegInf;
  bool present = false;

  void offer(const std::vector<int>& action, double r, const NetworkConfig& net) {
    if (r <= reward) return;
    if (!action_valid(action, net)) return;
    proposal = to_assignment(action);
    reward = r;
    present = true;
  }
};

// Per-node softmax over D logits; returns probabilities in-place layout
// [node][shard].
std::vector<double> per_node_softmax(const std::vector<double>& logits, int n, int d) {
  std::vector<double> probs(logits.size());
  for (int i = 0; i < n; ++i) {
    const double* row = logits.data() + static_cast<size_t>(i) * d;
    double* out = probs.data() + static_cast<size_t>(i) * d;
    double hi = row[0];
    for (int k = 1; k < d; ++k) hi = std::max(hi, row[k]);
    double denom = 0.0;
    for (int k = 0; k < d; ++k) {
      out[k] = std::exp(row[k] - hi);
      denom += out[k];
    }
    for (int k = 0; k < d; ++k) out[k] /= denom;
  }
  return probs;
}

double action_log_prob(const std::vector<double>& probs, const std::vector<int>& action,
                       int d) {
  double logp = 0.0;
  for (size_t i = 0; i < action.size(); ++i)
    logp += std::log(std::max(probs[i * static_cast<size_t>(d) +
                                    static_cast<size_t>(action[i])],
                              1e-300));
  return logp;
}

}  // namespace

ShardAssignment repair_assignment(const std::vector<double>& prefs, ShardAssignment raw,
                                  const NetworkConfig& net, bool* repaired) {
  if (repaired) *repaired = false;
  auto counts = decode_counts(raw.shard_of, net.d_shards);
  auto pref_at = [&prefs, &net](int node, int shard) {
    return prefs[static_cast<size_t>(node) * net.d_shards + static_cast<size_t>(shard)];
  };
  for (;;) {
    int deficient = -1;
    for (int x = 0; x < net.d_shards; ++x)
      if (counts[static_cast<size_t>(x)] < net.n_min &&
          (deficient < 0 ||
           counts[static_cast<size_t>(x)] < counts[static_cast<size_t>(deficient)]))
        deficient = x;
    if (deficient < 0) break;
    int donor = 0;
    for (int x = 1; x < net.d_shards; ++x)
      if (counts[static_cast<size_t>(x)] > counts[static_cast<size_t>(donor)]) donor = x;

    // Weakest preference margin for staying in the donor shard vs moving.
    int candidate = -1;
    double weakest = 0.0;
    for (int i = 0; i < net.n_total; ++i) {
      if (raw.shard_of[static_cast<size_t>(i)] != donor) continue;
      double margin = pref_at(i, donor) - pref_at(i, deficient);
      if (candidate < 0 || margin < weakest) {
        candidate = i;
        weakest = margin;
      }
    }
    raw.shard_of[static_cast<size_t>(candidate)] = deficient;
    --counts[static_cast<size_t>(donor)];
    ++counts[static_cast<size_t>(deficient)];
    if (repaired) *repaired = true;
  }
  return raw;
}

std::vector<double> TrainedPolicy::preferences(const Snapshot& snap) const {
  return net.forward(Environment::encode_state(snap));
}

ShardAssignment TrainedPolicy::raw_greedy(const Snapshot& snap) const {
  auto prefs = preferences(snap);
  ShardAssignment a;
  a.shard_of.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double* row = prefs.data() + static_cast<size_t>(i) * d;
    int best = 0;
    for (int k = 1; k < d; ++k)
      if (row[k] > row[best]) best = k;
    a.shard_of[static_cast<size_t>(i)] = best;
  }
  return a;
}

ShardAssignment TrainedPolicy::final_proposal(const Snapshot& snap, const SimConfig& cfg,
                                              std::string* note) const {
  auto prefs = preferences(snap);
  auto greedy = raw_greedy(snap);
  bool repaired = false;
  greedy = repair_assignment(prefs, std::move(greedy), cfg.network, &repaired);
  double greedy_reward = virtual_reward(snap, greedy, cfg).total;
  if (has_best_seen && best_seen_reward > greedy_reward) {
    if (note) *note = note->empty() ? "fallback" : *note + "|fallback";
    return best_seen;
  }
  if (repaired && note) *note = note->empty() ? "repaired" : *note + "|repaired";
  return greedy;
}

TrainedPolicy dqn_train(const Snapshot& snap, const SimConfig& cfg,
                        const DeterministicRng& rng) {
  auto reward = [&snap, &cfg](const ShardAssignment& proposal) {
    return virtual_reward(snap, proposal, cfg).total;
  };
  return dqn_train_on(Environment::encode_state(snap), cfg.network, reward, cfg.dqn, rng);
}

TrainedPolicy dqn_train_on(const std::vector<double>& features, const NetworkConfig& net,
                           const ProposalReward& reward, const DqnConfig& q,
                           const DeterministicRng& rng) {
  int n = net.n_total;
  int d = net.d_shards;
  auto in_dim = static_cast<int>(features.size());

  TrainedPolicy policy;
  policy.n = n;
  policy.d = d;
  policy.net = Mlp({in_dim, q.hidden_units, n * d});
  auto init_rng = rng.split("dqn-init");
  policy.net.init_xavier(init_rng);
  Mlp target = policy.net;  // synced copy; immediate-reward targets never read it

  SgdOptimizer opt(q.learning_rate, q.momentum);
  auto act_rng = rng.split("dqn-act");
  auto replay_rng = rng.split("dqn-replay");

  std::vector<Sample> replay;
  replay.reserve(static_cast<size_t>(q.replay_capacity));
  size_t replay_next = 0;
  BestSeen best;
  int step = 0;
  int updates = 0;

  std::vector<double> grad(policy.net.params().size());
  for (int epoch = 0; epoch < q.epochs; ++epoch) {
    auto qvals = policy.net.forward(features);
    double epoch_reward = 0.0;
    for (int s = 0; s < q.samples_per_epoch; ++s, ++step) {
      double frac = std::min(1.0, static_cast<double>(step) / q.epsilon_decay_steps);
      double epsilon = q.epsilon_start + (q.epsilon_end - q.epsilon_start) * frac;
      Sample sample;
      sample.action.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        if (act_rng.uniform01() < epsilon) {
          sample.action[static_cast<size_t>(i)] =
              static_cast<int>(act_rng.uniform_below(static_cast<uint64_t>(d)));
        } else {
          const double* row = qvals.data() + static_cast<size_t>(i) * d;
          int bestk = 0;
          for (int k = 1; k < d; ++k)
            if (row[k] > row[bestk]) bestk = k;
          sample.action[static_cast<size_t>(i)] = bestk;
        }
      }
      sample.reward = reward(to_assignment(sample.action));
      epoch_reward += sample.reward;
      best.offer(sample.action, sample.reward, net);
      if (static_cast<int>(replay.size()) < q.replay_capacity) {
        replay.push_back(std::move(sample));
      } else {
        replay[replay_next] = std::move(sample);
        replay_next = (replay_next + 1) % replay.size();
      }
    }

    double epoch_loss = 0.0;
    for (int u = 0; u < q.updates_per_epoch; ++u, ++updates) {
      int batch = std::min<int>(q.batch_size, static_cast<int>(replay.size()));
      Mlp::Cache cache;
      auto pred = policy.net.forward(features, cache);
      std::vector<double> upstream(pred.size(), 0.0);
      double loss = 0.0;
      double scale = 1.0 / (static_cast<double>(batch) * n);
      for (int b = 0; b < batch; ++b) {
        const auto& s =
            replay[static_cast<size_t>(replay_rng.uniform_below(replay.size()))];
        for (int i = 0; i < n; ++i) {
          auto idx = static_cast<size_t>(i) * d +
                     static_cast<size_t>(s.action[static_cast<size_t>(i)]);
          double diff = pred[idx] - s.reward;
          loss += diff * diff * scale;
          upstream[idx] += 2.0 * diff * scale;
        }
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      policy.net.backward(cache, upstream, grad);
      opt.step(policy.net.params(), grad);
      if (updates % q.target_sync_period == 0) target = policy.net;
      epoch_loss += loss;
    }
    policy.curve.push_back({epoch, epoch_reward / q.samples_per_epoch,
                            epoch_loss / q.updates_per_epoch});
  }

  policy.best_seen = best.proposal;
  policy.best_seen_reward = best.reward;
  policy.has_best_seen = best.present;
  return policy;
}

TrainedPolicy ppo_train(const Snapshot& snap, const SimConfig& cfg,
                        const DeterministicRng& rng) {
  auto reward = [&snap, &cfg](const ShardAssignment& proposal) {
    return virtual_reward(snap, proposal, cfg).total;
  };
  return ppo_train_on(Environment::encode_state(snap), cfg.network, reward, cfg.ppo, rng);
}

TrainedPolicy ppo_train_on(const std::vector<double>& features, const NetworkConfig& net,
                           const ProposalReward& reward, const PpoConfig& p,
                           const DeterministicRng& rng) {
  int n = net.n_total;
  int d = net.d_shards;
  auto in_dim = static_cast<int>(features.size());

  TrainedPolicy policy;
  policy.n = n;
  policy.d = d;
  policy.net = Mlp({in_dim, p.hidden_units, n * d});
  policy.critic = Mlp({in_dim, p.hidden_units, 1});
  auto actor_init = rng.split("ppo-actor-init");
  auto critic_init = rng.split("ppo-critic-init");
  policy.net.init_xavier(actor_init);
  policy.critic.init_xavier(critic_init);

  SgdOptimizer actor_opt(p.learning_rate, p.momentum);
  SgdOptimizer critic_opt(p.learning_rate, p.momentum);
  auto sample_rng = rng.split("ppo-sample");
  auto shuffle_rng = rng.split("ppo-shuffle");

  BestSeen best;
  std::vector<double> actor_grad(policy.net.params().size());
  std::vector<double> critic_grad(policy.critic.params().size());

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    // Rollout against the frozen snapshot.
    auto logits = policy.net.forward(features);
    auto probs = per_node_softmax(logits, n, d);
    std::vector<Sample> batch(static_cast<size_t>(p.rollout_batch));
    double epoch_reward = 0.0;
    for (auto& s : batch) {
      s.action.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        double draw = sample_rng.uniform01();
        const double* row = probs.data() + static_cast<size_t>(i) * d;
        double cum = 0.0;
        int choice = d - 1;
        for (int k = 0; k < d; ++k) {
          cum += row[k];
          if (draw < cum) {
            choice = k;
            break;
          }
        }
        s.action[static_cast<size_t>(i)] = choice;
      }
      s.logp_old = action_log_prob(probs, s.action, d);
      s.reward = reward(to_assignment(s.action));
      epoch_reward += s.reward;
      best.offer(s.action, s.reward, net);
    }
    epoch_reward /= p.rollout_batch;

    double value = policy.critic.forward(features)[0];
    std::vector<double> adv(batch.size());
    double mean = 0.0;
    for (size_t b = 0; b < batch.size(); ++b) {
      adv[b] = batch[b].reward - value;
      mean += adv[b];
    }
    mean /= static_cast<double>(batch.size());
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    double sd = std::sqrt(var / static_cast<double>(batch.size()));
    if (sd > 1e-8)
      for (double& a : adv) a = (a - mean) / sd;

    std::vector<size_t> order(batch.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    double last_loss = 0.0;

    for (int ue = 0; ue < p.update_epochs; ++ue) {
      for (size_t k = order.size(); k > 1; --k)
        std::swap(order[k - 1], order[shuffle_rng.uniform_below(k)]);
      size_t mb_size = (batch.size() + static_cast<size_t>(p.minibatches) - 1) /
                       static_cast<size_t>(p.minibatches);
      for (size_t start = 0; start < batch.size(); start += mb_size) {
        size_t end = std::min(batch.size(), start + mb_size);
        auto count = static_cast<double>(end - start);

        Mlp::Cache actor_cache;
        auto cur_logits = policy.net.forward(features, actor_cache);
        auto cur_probs = per_node_softmax(cur_logits, n, d);
        std::vector<double> upstream(cur_logits.size(), 0.0);

        double policy_loss = 0.0;
        for (size_t k = start; k < end; ++k) {
          const auto& s = batch[order[k]];
          double logp_new = action_log_prob(cur_probs, s.action, d);
          double ratio = std::exp(logp_new - s.logp_old);
          double a = adv[order[k]];
          double unclipped = ratio * a;
          double clipped =
              std::clamp(ratio, 1.0 - p.clip_ratio, 1.0 + p.clip_ratio) * a;
          policy_loss -= std::min(unclipped, clipped) / count;
          // Gradient flows only while the unclipped term is active.
          if (unclipped <= clipped) {
            double coef = -ratio * a / count;
            for (int i = 0; i < n; ++i) {
              auto base = static_cast<size_t>(i) * d;
              auto chosen = static_cast<size_t>(s.action[static_cast<size_t>(i)]);
              for (int c = 0; c < d; ++c) {
                double indicator = static_cast<size_t>(c) == chosen ? 1.0 : 0.0;
                upstream[base + static_cast<size_t>(c)] +=
                    coef * (indicator - cur_probs[base + static_cast<size_t>(c)]);
              }
            }
          }
        }

        // Entropy bonus; the state (hence the distribution) is shared by the
        // whole minibatch.
        double entropy = 0.0;
        for (int i = 0; i < n; ++i) {
          auto base = static_cast<size_t>(i) * d;
          double h = 0.0;
          for (int c = 0; c < d; ++c) {
            double pr = cur_probs[base + static_cast<size_t>(c)];
            if (pr > 0.0) h -= pr * std::log(pr);
          }
          entropy += h;
          for (int c = 0; c < d; ++c) {
            double pr = cur_probs[base + static_cast<size_t>(c)];
            if (pr > 0.0)
              upstream[base + static_cast<size_t>(c)] +=
                  p.entropy_coef * pr * (std::log(pr) + h);
          }
        }

        std::fill(actor_grad.begin(), actor_grad.end(), 0.0);
        policy.net.backward(actor_cache, upstream, actor_grad);
        actor_opt.step(policy.net.params(), actor_grad);

        Mlp::Cache critic_cache;
        double v = policy.critic.forward(features, critic_cache)[0];
        double value_loss = 0.0;
        double dv = 0.0;
        for (size_t k = start; k < end; ++k) {
          double diff = v - batch[order[k]].reward;
          value_loss += p.value_coef * diff * diff / count;
          dv += 2.0 * p.value_coef * diff / count;
        }
        std::vector<double> critic_upstream{dv};
        std::fill(critic_grad.begin(), critic_grad.end(), 0.0);
        policy.critic.backward(critic_cache, critic_upstream, critic_grad);
        critic_opt.step(policy.critic.params(), critic_grad);

        last_loss = policy_loss - p.entropy_coef * entropy + value_loss;
      }
    }
    policy.curve.push_back({epoch, epoch_reward, last_loss});
  }

  policy.best_seen = best.proposal;
  policy.best_seen_reward = best.reward;
  policy.has_best_seen = best.present;
  return policy;
}

Result<ShardAssignment> DqnStrategy::propose(const Snapshot& snap, DeterministicRng& rng,
                                             std::string* note) {
  auto policy = dqn_train(snap, cfg_, rng);
  return policy.final_proposal(snap, cfg_, note);
}

Result<ShardAssignment> PpoStrategy::propose(const Snapshot& snap, DeterministicRng& rng,
                                             std::string* note) {
  auto policy = ppo_train(snap, cfg_, rng);
  return policy.final_proposal(snap, cfg_, note);
}

}  // namespace tbdd

#include "tbdd/assignment.hpp"

#include "tbdd/rng.hpp"

namespace tbdd {

Result<ValidatedAssignment> validate_assignment(const ShardAssignment& a,
                                                const NetworkConfig& cfg) {
  if (a.n() != cfg.n_total)
    return make_error(Errc::dimension_mismatch,
                      "assignment length " + std::to_string(a.n()) + " != n_total " +
                          std::to_string(cfg.n_total),
                      a.n(), cfg.n_total);

  ValidatedAssignment out;
  out.shard_of_ = a.shard_of;
  out.members_.assign(static_cast<size_t>(cfg.d_shards), {});
  for (int i = 0; i < a.n(); ++i) {
    int s = a.shard_of[static_cast<size_t>(i)];
    if (s < 0 || s >= cfg.d_shards)
      return make_error(Errc::index_out_of_range,
                        "node " + std::to_string(i) + " assigned to shard " +
                            std::to_string(s) + " outside [0," +
                            std::to_string(cfg.d_shards) + ")",
                        i, s);
    out.members_[static_cast<size_t>(s)].push_back(i);
  }
  for (int x = 0; x < cfg.d_shards; ++x) {
    auto size = static_cast<int>(out.members_[static_cast<size_t>(x)].size());
    if (size < cfg.n_min)
      return make_error(Errc::shard_too_small,
                        "shard " + std::to_string(x) + " has " + std::to_string(size) +
                            " members, minimum is " + std::to_string(cfg.n_min),
                        x, size);
  }
  return out;
}

std::vector<NodeProfile> make_profiles(const NetworkConfig& net, const AttackConfig& atk,
                                       bool scattered) {
  std::vector<NodeProfile> profiles(static_cast<size_t>(net.n_total));
  for (int i = 0; i < net.n_total; ++i) profiles[static_cast<size_t>(i)].id = i;
  if (scattered) {
    DeterministicRng rng(net.seed, "profiles");
    auto perm = rng.permutation(net.n_total);
    for (int k = 0; k < atk.h_dishonest; ++k)
      profiles[static_cast<size_t>(perm[static_cast<size_t>(k)])].honesty =
          Honesty::dishonest;
  } else {
    for (int k = 0; k < atk.h_dishonest; ++k)
      profiles[static_cast<size_t>(k)].honesty = Honesty::dishonest;
  }
  return profiles;
}

}  // namespace tbdd

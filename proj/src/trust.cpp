#include "tbdd/trust.hpp"

#include <algorithm>
#include <cmath>

namespace tbdd {

std::vector<double> LocalTrustTable::row(int i) const {
  auto begin = l_.begin() + static_cast<long>(index(i, 0));
  return std::vector<double>(begin, begin + n_);
}

Result<double> leader_pass_ratio(const BlockVerificationTable& bvt, int j) {
  int iota = bvt.leads(j);
  if (iota == 0)
    return make_error(Errc::never_led, "node " + std::to_string(j) + " never led", j);
  int n_x = bvt.shard_size_of(j);
  long total_valid = 0;
  for (int i : bvt.shard_members_of(j)) total_valid += bvt.valid_votes(i, j);
  return static_cast<double>(total_valid) / (static_cast<double>(iota) * n_x);
}

Result<double> indirect_feedback(const BlockVerificationTable& bvt, int i, int j,
                                 const TrustConfig& cfg) {
  auto vj = leader_pass_ratio(bvt, j);
  if (!vj) return vj.error();
  int n_x = bvt.shard_size_of(j);
  if (n_x <= 2) {
    // No third parties; the averaged term's divisor is undefined.
    return cfg.gamma * vj.value();
  }
  double iota_j = bvt.leads(j);
  double testimony = 0.0;
  for (int p : bvt.shard_members_of(j)) {
    if (p == i || p == j) continue;
    auto vp = leader_pass_ratio(bvt, p);
    if (!vp) return vp.error();
    double delta = bvt.nonempty_ratio(p, j);
    double exponent = iota_j - delta + 1.0;
    // 0^0 := 1.
    double powered = (vp.value() == 0.0 && exponent == 0.0)
                         ? 1.0
                         : std::pow(vp.value(), exponent);
    testimony += delta * powered;
  }
  return cfg.gamma * vj.value() +
         (cfg.gamma * cfg.gamma / (n_x - 2)) * testimony;
}

Result<double> direct_feedback(const BlockVerificationTable& bvt, int i, int j) {
  int iota_i = bvt.leads(i);
  if (iota_i == 0)
    return make_error(Errc::never_led, "node " + std::to_string(i) + " never led", i);
  return static_cast<double>(bvt.valid_votes(j, i)) / iota_i;
}

Result<LocalTrustTable> build_ltt(const BlockVerificationTable& bvt,
                                  const GlobalTrustTable& g_prev,
                                  const TrustConfig& cfg) {
  int n = bvt.n();
  LocalTrustTable ltt(n, g_prev.episode + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double prior = g_prev.g[static_cast<size_t>(j)];
      if (bvt.shard_of(i) != bvt.shard_of(j)) {
        ltt.set(i, j, prior);
        continue;
      }
      auto indirect = indirect_feedback(bvt, i, j, cfg);
      if (!indirect) return indirect.error();
      double direct;
      if (i == j) {
        direct = 1.0;  // leaders self-vote valid by construction
      } else {
        auto fd = direct_feedback(bvt, i, j);
        if (!fd) return fd.error();
        direct = fd.value();
      }
      double clamped = std::clamp(indirect.value(), 0.0, 1.0);
      ltt.set(i, j, cfg.alpha * clamped + cfg.beta * direct + cfg.mu * prior);
    }
  }
  return ltt;
}

double row_similarity(const LocalTrustTable& l, int i, int j) {
  double dot = 0.0, ni = 0.0, nj = 0.0;
  for (int k = 0; k < l.n(); ++k) {
    double a = l.at(i, k);
    double b = l.at(j, k);
    dot += a * b;
    ni += a * a;
    nj += b * b;
  }
  if (ni == 0.0 || nj == 0.0) return 0.0;
  return dot / (std::sqrt(ni) * std::sqrt(nj));
}

GlobalTrustTable build_gtt(const LocalTrustTable& l, const GlobalTrustTable& g_prev) {
  int n = l.n();
  GlobalTrustTable out;
  out.episode = g_prev.episode + 1;
  out.history = g_prev.history;
  out.history.push_back(g_prev.g);
  out.g.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += row_similarity(l, i, j);
    out.g[static_cast<size_t>(i)] = sum / n;
  }
  return out;
}

double row_similarity_on(const LocalTrustTable& l, int i, int j,
                         const std::vector<int>& columns) {
  double dot = 0.0, ni = 0.0, nj = 0.0;
  for (int k : columns) {
    double a = l.at(i, k);
    double b = l.at(j, k);
    dot += a * b;
    ni += a * a;
    nj += b * b;
  }
  if (ni == 0.0 || nj == 0.0) return 0.0;
  return dot / (std::sqrt(ni) * std::sqrt(nj));
}

GlobalTrustTable build_gtt_shard_scoped(const LocalTrustTable& l,
                                        const ValidatedAssignment& a,
                                        const GlobalTrustTable& g_prev) {
  GlobalTrustTable out;
  out.episode = g_prev.episode + 1;
  out.history = g_prev.history;
  out.history.push_back(g_prev.g);
  out.g.resize(static_cast<size_t>(l.n()));
  for (const auto& members : a.members()) {
    for (int i : members) {
      double sum = 0.0;
      for (int j : members) sum += row_similarity_on(l, i, j, members);
      out.g[static_cast<size_t>(i)] = sum / static_cast<double>(members.size());
    }
  }
  return out;
}

}  // namespace tbdd

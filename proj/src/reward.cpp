#include "tbdd/reward.hpp"

#include <algorithm>
#include <cmath>

namespace tbdd {

double shard_balance(const ValidatedAssignment& a, const RewardConfig& cfg) {
  size_t lo = a.members().front().size();
  size_t hi = lo;
  for (const auto& shard : a.members()) {
    lo = std::min(lo, shard.size());
    hi = std::max(hi, shard.size());
  }
  return static_cast<long>(hi - lo) <= cfg.balance_slack ? cfg.e_a : -cfg.e_a;
}

double corruption_reward(const RiskReport& report, const RewardConfig& cfg) {
  return report.corrupted_count == 0 ? cfg.e_b : -cfg.e_b;
}

double cst_reward(double cst_ratio, const RiskConfig& risk_cfg, const RewardConfig& cfg) {
  double gap = risk_cfg.rho_cr - cst_ratio;
  return cfg.lambda_a * gap * std::pow(cfg.lambda_b, cfg.lambda_c * std::fabs(gap));
}

Result<double> shift_penalty(const ValidatedAssignment& prev,
                             const ValidatedAssignment& next) {
  if (prev.n() != next.n())
    return make_error(Errc::dimension_mismatch, "assignments differ in length", prev.n(),
                      next.n());
  int moved = 0;
  for (int i = 0; i < prev.n(); ++i)
    if (prev.shard_of_node(i) != next.shard_of_node(i)) ++moved;
  return static_cast<double>(moved) / prev.n();
}

double intra_trust_variance(const GlobalTrustTable& g, const ValidatedAssignment& a) {
  double acc = 0.0;
  for (const auto& shard : a.members()) {
    if (shard.empty()) continue;
    double mean = 0.0;
    for (int i : shard) mean += g.g[static_cast<size_t>(i)];
    mean /= static_cast<double>(shard.size());
    double var = 0.0;
    for (int i : shard) {
      double dev = g.g[static_cast<size_t>(i)] - mean;
      var += dev * dev;
    }
    acc += var / static_cast<double>(shard.size());
  }
  return acc / a.d();
}

double cross_trust_variance(const GlobalTrustTable& g, const ValidatedAssignment& a) {
  std::vector<double> means;
  means.reserve(static_cast<size_t>(a.d()));
  for (const auto& shard : a.members()) {
    double mean = 0.0;
    for (int i : shard) mean += g.g[static_cast<size_t>(i)];
    means.push_back(shard.empty() ? 0.0 : mean / static_cast<double>(shard.size()));
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  return var / static_cast<double>(means.size());
}

Result<RewardBreakdown> total_reward(const RewardInputs& in, const ShardAssignment& proposal,
                                     const NetworkConfig& net, const TrustConfig& trust_cfg,
                                     const RiskConfig& risk_cfg, const RewardConfig& cfg) {
  auto validated = validate_assignment(proposal, net);
  if (!validated) {
    const auto& e = validated.error();
    if (e.code == Errc::shard_too_small)
      return make_error(Errc::constraint_violation, e.message, e.a, e.b);
    return e;
  }
  const auto& next = validated.value();

  auto stats = cst_stats(*in.tx, next);
  if (!stats) return stats.error();
  auto psi = shift_penalty(*in.prev, next);
  if (!psi) return psi.error();

  RiskReport report = evaluate_risk(*in.gtt, next, stats.value(), trust_cfg, risk_cfg);

  RewardBreakdown out;
  out.xi = shard_balance(next, cfg);
  out.varrho = corruption_reward(report, cfg);
  out.eta = cst_reward(stats.value().cst_ratio, risk_cfg, cfg);
  out.psi = psi.value();
  out.omega_in = intra_trust_variance(*in.gtt, next);
  out.omega_cr = cross_trust_variance(*in.gtt, next);
  out.total = out.xi + out.varrho + out.eta - out.psi + out.omega_in - out.omega_cr;
  return out;
}

RewardBreakdown violation_penalty(const RewardConfig& cfg) {
  RewardBreakdown out;
  out.violation = true;
  out.xi = -(2.0 * cfg.e_a + 2.0 * cfg.e_b);
  out.total = out.xi;
  return out;
}

}  // namespace tbdd

#include "tbdd/risk.hpp"

namespace tbdd {

int f_intra(int n_x) { return (n_x - 1) / 3; }

int f_total(int n, int d) { return ((n / d - 1) / 3) * d; }

RiskReport evaluate_risk(const GlobalTrustTable& g, const ValidatedAssignment& a,
                         const TxStats& stats, const TrustConfig& trust_cfg,
                         const RiskConfig& risk_cfg) {
  RiskReport report;
  int d = a.d();
  report.high_risk.resize(static_cast<size_t>(d));
  report.shard_means.resize(static_cast<size_t>(d));
  report.corrupted.resize(static_cast<size_t>(d));
  report.cst_ratio = stats.cst_ratio;

  for (int x = 0; x < d; ++x) {
    const auto& members = a.shard_members(x);
    double sum = 0.0;
    for (int i : members) {
      double gi = g.g[static_cast<size_t>(i)];
      sum += gi;
      if (gi < trust_cfg.rho_t) report.high_risk[static_cast<size_t>(x)].push_back(i);
    }
    report.shard_means[static_cast<size_t>(x)] =
        members.empty() ? 0.0 : sum / static_cast<double>(members.size());
    bool corrupt = static_cast<int>(report.high_risk[static_cast<size_t>(x)].size()) >
                   f_intra(static_cast<int>(members.size()));
    report.corrupted[static_cast<size_t>(x)] = corrupt;
    if (corrupt) {
      ++report.corrupted_count;
      if (report.corrupted_shard < 0) report.corrupted_shard = x;
    }
  }

  double mean_sum = 0.0;
  for (double m : report.shard_means) mean_sum += m;
  report.grand_mean = d > 0 ? mean_sum / d : 0.0;

  if (report.corrupted_count > 0) {
    report.trigger = Trigger::trigger;
    report.reason = TriggerReason::shard_corrupted;
  } else if (stats.cst_ratio > risk_cfg.rho_cr) {
    report.trigger = Trigger::trigger;
    report.reason = TriggerReason::cst_exceeded;
  }
  return report;
}

}  // namespace tbdd

#include "tbdd/metrics.hpp"

namespace tbdd {

double episode_throughput(const ShardTxProfile& profile,
                          const std::vector<bool>& corrupted,
                          const ThroughputConfig& model) {
  double throughput = 0.0;
  auto d = profile.ist.size();
  for (size_t x = 0; x < d; ++x) {
    if (corrupted[x]) continue;
    throughput += static_cast<double>(profile.ist[x]);
    for (size_t y = x + 1; y < d; ++y) {
      if (corrupted[y]) continue;
      throughput += static_cast<double>(profile.cst[x][y]) / model.cst_cost;
    }
  }
  return throughput;
}

RunMetrics aggregate_run(std::vector<EpisodeRow> rows, int window) {
  RunMetrics out;
  out.rows = std::move(rows);
  out.window = window;
  if (out.rows.empty()) return out;
  double n = static_cast<double>(out.rows.size());
  for (const auto& r : out.rows) {
    out.mean_reward += r.reward.total;
    out.mean_cst_ratio += r.cst_ratio;
    out.mean_psi += r.reward.psi;
    out.mean_omega_in += r.reward.omega_in;
    out.mean_omega_cr += r.reward.omega_cr;
    out.mean_throughput += r.throughput;
  }
  out.mean_reward /= n;
  out.mean_cst_ratio /= n;
  out.mean_psi /= n;
  out.mean_omega_in /= n;
  out.mean_omega_cr /= n;
  out.mean_throughput /= n;
  auto ratio = corrupted_shard_ratio(out.rows, std::min<int>(window, static_cast<int>(n)));
  out.corrupted_shard_ratio = ratio ? ratio.value() : 0.0;
  return out;
}

Result<double> normalized_throughput(const RunMetrics& run_h, const RunMetrics& run_0) {
  if (run_0.mean_throughput <= 0.0)
    return make_error(Errc::division_by_zero, "baseline run has zero throughput");
  return run_h.mean_throughput / run_0.mean_throughput;
}

Result<double> corrupted_shard_ratio(const std::vector<EpisodeRow>& rows, int window) {
  if (window < 1 || static_cast<int>(rows.size()) < window)
    return make_error(Errc::insufficient_rows,
                      "need at least " + std::to_string(window) + " rows, have " +
                          std::to_string(rows.size()),
                      window, static_cast<long>(rows.size()));
  long cells = 0;
  long corrupted = 0;
  for (size_t k = rows.size() - static_cast<size_t>(window); k < rows.size(); ++k) {
    cells += rows[k].d_shards;
    corrupted += rows[k].corrupted_count;
  }
  if (cells == 0) return 0.0;
  return static_cast<double>(corrupted) / static_cast<double>(cells);
}

}  // namespace tbdd

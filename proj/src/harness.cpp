#include "tbdd/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tbdd/baselines.hpp"
#include "tbdd/drl.hpp"

namespace tbdd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const char* reason_name(TriggerReason r) {
  switch (r) {
    case TriggerReason::none: return "none";
    case TriggerReason::shard_corrupted: return "shard_corrupted";
    case TriggerReason::cst_exceeded: return "cst_exceeded";
  }
  return "none";
}

std::string run_stem(const RunSpec& spec) {
  std::ostringstream name;
  name << "run_" << spec.strategy << "_h" << spec.cfg.attack.h_dishonest << "_seed"
       << spec.cfg.network.seed;
  return name.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f);
}

}  // namespace

Result<std::unique_ptr<ReshardingStrategy>> make_strategy(const std::string& name,
                                                          const SimConfig& cfg) {
  if (name == "random") return std::unique_ptr<ReshardingStrategy>(new RandomStrategy());
  if (name == "community")
    return std::unique_ptr<ReshardingStrategy>(new CommunityStrategy(cfg.community_sweeps));
  if (name == "trust") return std::unique_ptr<ReshardingStrategy>(new TrustStrategy());
  if (name == "dqn") return std::unique_ptr<ReshardingStrategy>(new DqnStrategy(cfg));
  if (name == "ppo") return std::unique_ptr<ReshardingStrategy>(new PpoStrategy(cfg));
  return make_error(Errc::config_invalid, "unknown strategy: " + name);
}

namespace {

json bvt_to_json(const BlockVerificationTable& bvt) {
  static constexpr const char* kOutcome[] = {"valid", "invalid", "missing"};
  json shards = json::array();
  for (const auto& sb : bvt.shards()) {
    json entry;
    entry["shard"] = sb.shard;
    entry["members"] = sb.members;
    entry["schedule"] = sb.schedule;
    json grid = json::array();
    for (const auto& round : sb.votes) {
      json row = json::array();
      for (auto v : round) row.push_back(kOutcome[static_cast<int>(v)]);
      grid.push_back(std::move(row));
    }
    entry["votes"] = std::move(grid);
    shards.push_back(std::move(entry));
  }
  return shards;
}

}  // namespace

Result<RunMetrics> execute_run(const RunSpec& spec, std::string* bvt_json) {
  auto strategy = make_strategy(spec.strategy, spec.cfg);
  if (!strategy) return strategy.error();
  Environment env(spec.cfg, spec.strategy);
  std::vector<EpisodeRow> rows;
  rows.reserve(static_cast<size_t>(spec.episodes));
  json bvt_dump = json::array();
  for (int e = 0; e < spec.episodes; ++e) {
    auto row = env.step_episode(*strategy.value());
    if (!row) return row.error();
    rows.push_back(std::move(row.value()));
    if (spec.dump_bvt && bvt_json) {
      json entry;
      entry["episode"] = rows.back().episode;
      entry["shards"] = bvt_to_json(env.state().last_bvt);
      bvt_dump.push_back(std::move(entry));
    }
  }
  if (spec.dump_bvt && bvt_json) *bvt_json = bvt_dump.dump(2) + "\n";
  return aggregate_run(std::move(rows), std::min(100, spec.episodes));
}

std::string episode_csv(const std::vector<EpisodeRow>& rows) {
  std::ostringstream out;
  out << "episode,strategy,h,seed,xi,varrho,eta,psi,omega_in,omega_cr,reward_total,"
         "cst_ratio,corrupted_count,throughput,trigger_reason,note";
  size_t n = rows.empty() ? 0 : rows.front().gtt.size();
  for (size_t i = 0; i < n; ++i) out << ",gtt_" << i;
  out << "\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << r.strategy << ',' << r.h << ',' << r.seed << ','
        << fmt_double(r.reward.xi) << ',' << fmt_double(r.reward.varrho) << ','
        << fmt_double(r.reward.eta) << ',' << fmt_double(r.reward.psi) << ','
        << fmt_double(r.reward.omega_in) << ',' << fmt_double(r.reward.omega_cr) << ','
        << fmt_double(r.reward.total) << ',' << fmt_double(r.cst_ratio) << ','
        << r.corrupted_count << ',' << fmt_double(r.throughput) << ','
        << reason_name(r.reason) << ',' << r.note;
    for (double g : r.gtt) out << ',' << fmt_double(g);
    out << "\n";
  }
  return out.str();
}

std::string run_summary_json(const RunSpec& spec, const RunMetrics& metrics) {
  json j;
  j["strategy"] = spec.strategy;
  j["h"] = spec.cfg.attack.h_dishonest;
  j["seed"] = spec.cfg.network.seed;
  j["episodes"] = spec.episodes;
  j["n_total"] = spec.cfg.network.n_total;
  j["d_shards"] = spec.cfg.network.d_shards;
  j["mean_reward"] = metrics.mean_reward;
  j["mean_cst_ratio"] = metrics.mean_cst_ratio;
  j["mean_psi"] = metrics.mean_psi;
  j["mean_omega_in"] = metrics.mean_omega_in;
  j["mean_omega_cr"] = metrics.mean_omega_cr;
  j["mean_throughput"] = metrics.mean_throughput;
  j["corrupted_shard_ratio"] = metrics.corrupted_shard_ratio;
  j["corrupted_ratio_window"] = metrics.window;
  j["throughput_model"] = "model-derived";
  return j.dump(2) + "\n";
}

Result<std::vector<RunArtifact>> run_experiment(const ExperimentPlan& plan, int jobs) {
  std::error_code ec;
  fs::create_directories(plan.out_dir, ec);
  if (ec && !fs::exists(plan.out_dir))
    return make_error(Errc::io_error, "cannot create output dir: " + plan.out_dir);

  std::vector<RunArtifact> artifacts(plan.runs.size());
  std::atomic<size_t> next{0};
  auto worker = [&plan, &artifacts, &next]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= plan.runs.size()) return;
      const auto& spec = plan.runs[k];
      RunArtifact art;
      art.spec = spec;
      std::string stem = run_stem(spec);
      art.csv_path = (fs::path(plan.out_dir) / (stem + ".csv")).string();
      art.summary_path = (fs::path(plan.out_dir) / (stem + ".json")).string();
      std::string bvt_json;
      auto metrics = execute_run(spec, spec.dump_bvt ? &bvt_json : nullptr);
      if (!metrics) {
        art.error = metrics.error().message;
      } else if (!write_file(art.csv_path, episode_csv(metrics.value().rows))) {
        art.error = "cannot write " + art.csv_path;
      } else if (!write_file(art.summary_path, run_summary_json(spec, metrics.value()))) {
        art.error = "cannot write " + art.summary_path;
      } else if (spec.dump_bvt &&
                 !write_file((fs::path(plan.out_dir) / (stem + "_bvt.json")).string(),
                             bvt_json)) {
        art.error = "cannot write bvt dump";
      } else {
        art.success = true;
      }
      artifacts[k] = std::move(art);
    }
  };

  int workers = std::max(1, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json index = json::array();
  for (const auto& art : artifacts) {
    json entry;
    entry["strategy"] = art.spec.strategy;
    entry["h"] = art.spec.cfg.attack.h_dishonest;
    entry["seed"] = art.spec.cfg.network.seed;
    entry["episodes"] = art.spec.episodes;
    entry["config"] = dump_config(art.spec.cfg);
    entry["csv"] = art.csv_path;
    entry["summary"] = art.summary_path;
    entry["success"] = art.success;
    entry["error"] = art.error;
    index.push_back(std::move(entry));
  }
  if (!write_file((fs::path(plan.out_dir) / "index.json").string(), index.dump(2) + "\n"))
    return make_error(Errc::io_error, "cannot write index.json");
  return artifacts;
}

Result<RunSpec> run_spec_from_index(const std::string& index_path, size_t entry) {
  std::ifstream f(index_path);
  if (!f) return make_error(Errc::io_error, "cannot open " + index_path);
  json index;
  try {
    f >> index;
  } catch (const std::exception& e) {
    return make_error(Errc::io_error, std::string("bad index json: ") + e.what());
  }
  if (!index.is_array() || entry >= index.size())
    return make_error(Errc::index_out_of_range, "index entry out of range",
                      static_cast<long>(entry), static_cast<long>(index.size()));
  const auto& je = index[entry];
  auto cfg = parse_config_text(je.at("config").get<std::string>());
  if (!cfg) return cfg.error();
  RunSpec spec;
  spec.strategy = je.at("strategy").get<std::string>();
  spec.cfg = cfg.value();
  spec.episodes = je.at("episodes").get<int>();
  return spec;
}

Result<OracleResult> brute_force_oracle(const Snapshot& snap, const SimConfig& cfg) {
  int n = snap.assignment.n();
  int d = snap.assignment.d();
  double space = std::pow(static_cast<double>(d), n);
  if (space > static_cast<double>(1 << 20))
    return make_error(Errc::too_large,
                      "assignment space " + std::to_string(d) + "^" + std::to_string(n) +
                          " exceeds the 2^20 cap",
                      d, n);

  OracleResult best;
  bool found = false;
  ShardAssignment probe;
  probe.shard_of.assign(static_cast<size_t>(n), 0);
  RewardInputs in{&snap.gtt, &snap.tx, &snap.assignment};
  for (;;) {
    auto r = total_reward(in, probe, cfg.network, cfg.trust, cfg.risk, cfg.reward);
    if (r) {
      ++best.evaluated;
      // Lexicographic enumeration order; strict improvement keeps the
      // smallest maximizer.
      if (!found || r.value().total > best.breakdown.total) {
        found = true;
        best.best = probe;
        best.breakdown = r.value();
      }
    }
    // Odometer increment, node 0 most significant.
    int pos = n - 1;
    while (pos >= 0) {
      auto idx = static_cast<size_t>(pos);
      if (++probe.shard_of[idx] < d) break;
      probe.shard_of[idx] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  if (!found)
    return make_error(Errc::constraint_violation, "no valid assignment in the space");
  return best;
}

}  // namespace tbdd

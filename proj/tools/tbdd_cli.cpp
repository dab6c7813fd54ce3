// Command-line front end: experiment sweeps, config validation, and the
// brute-force snapshot oracle.

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbdd/config.hpp"
#include "tbdd/environment.hpp"
#include "tbdd/harness.hpp"

namespace {

using namespace tbdd;

// Parses "1,2,5" and "1..10" (inclusive range).
std::vector<uint64_t> parse_list(const std::string& text) {
  std::vector<uint64_t> out;
  auto range = text.find("..");
  if (range != std::string::npos) {
    uint64_t lo = std::stoull(text.substr(0, range));
    uint64_t hi = std::stoull(text.substr(range + 2));
    for (uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stoull(cell));
  return out;
}

std::string env_name_for_key(const std::string& key) {
  std::string name = "TBDD_";
  for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(c));
  return name;
}

// Precedence: defaults < config file < TBDD_* environment < explicit flags.
Result<SimConfig> effective_config(const std::string& config_path,
                                   const std::map<std::string, std::string>& flag_overrides) {
  SimConfig cfg;
  if (!config_path.empty()) {
    auto loaded = load_config_file(config_path);
    if (!loaded) return loaded.error();
    cfg = loaded.value();
  }
  std::map<std::string, std::string> env_overrides;
  for (const auto& key : config_keys()) {
    if (const char* v = std::getenv(env_name_for_key(key).c_str())) env_overrides[key] = v;
  }
  if (!env_overrides.empty()) {
    auto merged = apply_overrides(cfg, env_overrides);
    if (!merged) return merged.error();
    cfg = merged.value();
  }
  return apply_overrides(cfg, flag_overrides);
}

// Holds resharding until the oracle snapshot is taken.
class KeepStrategy : public ReshardingStrategy {
 public:
  std::string name() const override { return "keep"; }
  Result<ShardAssignment> propose(const Snapshot& snap, DeterministicRng&,
                                  std::string*) override {
    return snap.assignment.raw();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tbdd: sharded-blockchain collusion simulator and resharding lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string strategies = "dqn";
  std::string dishonest_list;
  std::string seed_list;
  int nodes = -1;
  int shards = -1;
  int episodes = 100;
  int jobs = 1;
  int warmup = 3;
  size_t index_entry = 0;
  std::string out_dir = "out";
  bool dump_bvt = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file path");
    cmd->add_option("--nodes", nodes, "override network.n_total");
    cmd->add_option("--shards", shards, "override network.d_shards");
  };

  auto* run = app.add_subcommand("run", "execute an experiment plan");
  add_common(run);
  run->add_option("--strategy", strategies, "comma list of {random,community,trust,dqn,ppo}");
  run->add_option("--dishonest", dishonest_list, "h values, e.g. 0,1,2 or 0..5");
  run->add_option("--seeds", seed_list, "seeds, e.g. 1,2,3 or 1..10");
  run->add_option("--episodes", episodes, "episodes per run");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "parallel runs");
  run->add_flag("--dump-bvt", dump_bvt, "(debug) include vote grids in run output");

  auto* oracle = app.add_subcommand("oracle", "brute-force the optimal allocation");
  add_common(oracle);
  oracle->add_option("--dishonest", dishonest_list, "single h value");
  oracle->add_option("--seeds", seed_list, "single seed");
  oracle->add_option("--warmup", warmup, "episodes to simulate before the snapshot");

  auto* validate_cmd = app.add_subcommand("validate", "check a config file");
  add_common(validate_cmd);

  auto* dump = app.add_subcommand("dump-config", "print the effective config");
  add_common(dump);
  dump->add_option("--dishonest", dishonest_list, "single h value");
  dump->add_option("--seeds", seed_list, "single seed");

  auto* rerun = app.add_subcommand("rerun", "re-execute one entry of an index.json");
  rerun->add_option("--index", config_path, "path to index.json")->required();
  rerun->add_option("--entry", index_entry, "entry position");
  rerun->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  std::map<std::string, std::string> overrides;
  if (nodes >= 0) overrides["network.n_total"] = std::to_string(nodes);
  if (shards >= 0) overrides["network.d_shards"] = std::to_string(shards);

  if (app.got_subcommand(validate_cmd)) {
    auto cfg = effective_config(config_path, overrides);
    if (!cfg) {
      std::cerr << "invalid: " << cfg.error().message << "\n";
      return 1;
    }
    std::cout << "ok\n";
    return 0;
  }

  if (app.got_subcommand(dump)) {
    if (!dishonest_list.empty())
      overrides["attack.h_dishonest"] = std::to_string(parse_list(dishonest_list).front());
    if (!seed_list.empty())
      overrides["network.seed"] = std::to_string(parse_list(seed_list).front());
    auto cfg = effective_config(config_path, overrides);
    if (!cfg) {
      std::cerr << "invalid: " << cfg.error().message << "\n";
      return 1;
    }
    std::cout << dump_config(cfg.value());
    return 0;
  }

  if (app.got_subcommand(rerun)) {
    auto spec = run_spec_from_index(config_path, index_entry);
    if (!spec) {
      std::cerr << "error: " << spec.error().message << "\n";
      return 1;
    }
    ExperimentPlan plan{{spec.value()}, out_dir};
    auto arts = run_experiment(plan, 1);
    if (!arts || !arts.value().front().success) {
      std::cerr << "error: "
                << (arts ? arts.value().front().error : arts.error().message) << "\n";
      return 1;
    }
    std::cout << arts.value().front().csv_path << "\n";
    return 0;
  }

  if (app.got_subcommand(oracle)) {
    if (!dishonest_list.empty())
      overrides["attack.h_dishonest"] = std::to_string(parse_list(dishonest_list).front());
    if (!seed_list.empty())
      overrides["network.seed"] = std::to_string(parse_list(seed_list).front());
    auto cfg = effective_config(config_path, overrides);
    if (!cfg) {
      std::cerr << "invalid: " << cfg.error().message << "\n";
      return 1;
    }
    Environment env(cfg.value(), "oracle");
    KeepStrategy keep;
    for (int e = 0; e < warmup; ++e) {
      auto row = env.step_episode(keep);
      if (!row) {
        std::cerr << "error: " << row.error().message << "\n";
        return 1;
      }
    }
    auto result = brute_force_oracle(env.snapshot(), cfg.value());
    if (!result) {
      std::cerr << "error: " << result.error().message << "\n";
      return 1;
    }
    std::cout << "assignment:";
    for (int s : result.value().best.shard_of) std::cout << ' ' << s;
    const auto& b = result.value().breakdown;
    std::cout << "\nreward: " << b.total << "\nxi: " << b.xi << " varrho: " << b.varrho
              << " eta: " << b.eta << " psi: " << b.psi << " omega_in: " << b.omega_in
              << " omega_cr: " << b.omega_cr << "\nevaluated: " << result.value().evaluated
              << "\n";
    return 0;
  }

  // run
  auto cfg = effective_config(config_path, overrides);
  if (!cfg) {
    std::cerr << "invalid: " << cfg.error().message << "\n";
    return 1;
  }
  std::vector<uint64_t> hs =
      dishonest_list.empty()
          ? std::vector<uint64_t>{static_cast<uint64_t>(cfg.value().attack.h_dishonest)}
          : parse_list(dishonest_list);
  std::vector<uint64_t> seeds = seed_list.empty()
                                    ? std::vector<uint64_t>{cfg.value().network.seed}
                                    : parse_list(seed_list);

  ExperimentPlan plan;
  plan.out_dir = out_dir;
  std::istringstream strat_in(strategies);
  std::string strat;
  while (std::getline(strat_in, strat, ',')) {
    for (uint64_t h : hs) {
      for (uint64_t seed : seeds) {
        RunSpec spec;
        spec.strategy = strat;
        spec.cfg = cfg.value();
        spec.cfg.attack.h_dishonest = static_cast<int>(h);
        spec.cfg.network.seed = seed;
        spec.episodes = episodes;
        spec.dump_bvt = dump_bvt;
        auto errs = validate(spec.cfg);
        if (!errs.empty()) {
          std::cerr << "invalid: " << errs.front() << "\n";
          return 1;
        }
        plan.runs.push_back(std::move(spec));
      }
    }
  }

  auto artifacts = run_experiment(plan, jobs);
  if (!artifacts) {
    std::cerr << "error: " << artifacts.error().message << "\n";
    return 1;
  }
  bool all_ok = true;
  for (const auto& art : artifacts.value()) {
    std::cout << (art.success ? "ok   " : "FAIL ") << art.csv_path;
    if (!art.success) std::cout << "  (" << art.error << ")";
    std::cout << "\n";
    all_ok = all_ok && art.success;
  }
  return all_ok ? 0 : 1;
}

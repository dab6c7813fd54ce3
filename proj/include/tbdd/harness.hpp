#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/environment.hpp"
#include "tbdd/metrics.hpp"
#include "tbdd/strategy.hpp"

namespace tbdd {

// One reproducible unit of work: everything needed to execute it is in here.
struct RunSpec {
  std::string strategy;  // random | community | trust | dqn | ppo
  SimConfig cfg;         // carries h_dishonest and seed
  int episodes = 100;
  bool dump_bvt = false;  // debug: also write per-episode vote grids
};

struct ExperimentPlan {
  std::vector<RunSpec> runs;
  std::string out_dir;
};

struct RunArtifact {
  RunSpec spec;
  std::string csv_path;
  std::string summary_path;
  bool success = false;
  std::string error;
};

// random | community | trust | dqn | ppo.
Result<std::unique_ptr<ReshardingStrategy>> make_strategy(const std::string& name,
                                                          const SimConfig& cfg);

// Executes one run in memory (no files). When spec.dump_bvt is set and
// `bvt_json` is non-null, it receives the per-episode vote grids as JSON.
Result<RunMetrics> execute_run(const RunSpec& spec, std::string* bvt_json = nullptr);

// Fixed column order, documented in the README; float formatting is
// deterministic so identical runs produce byte-identical files.
std::string episode_csv(const std::vector<EpisodeRow>& rows);
std::string run_summary_json(const RunSpec& spec, const RunMetrics& metrics);

// Executes every run (jobs > 1 uses a worker pool), writes one CSV and one
// summary JSON per run plus an index.json describing all artifacts with their
// embedded configs. Returns the artifact list; per-run failures are recorded
// there without aborting the rest.
Result<std::vector<RunArtifact>> run_experiment(const ExperimentPlan& plan, int jobs = 1);

// Reconstructs a RunSpec from an index.json entry (by position).
Result<RunSpec> run_spec_from_index(const std::string& index_path, size_t entry);

struct OracleResult {
  ShardAssignment best;
  RewardBreakdown breakdown;
  long evaluated = 0;  // valid assignments scored
};

// Enumerates all D^N assignments (capped at 2^20), scores the valid ones,
// and returns the maximizer; ties resolve to the lexicographically smallest
// assignment vector.
Result<OracleResult> brute_force_oracle(const Snapshot& snap, const SimConfig& cfg);

}  // namespace tbdd

#pragma once

#include <filesystem>
#include <memory>

#include "pisrl/behavior_cloning.hpp"
#include "pisrl/config.hpp"
#include "pisrl/environment.hpp"
#include "pisrl/metrics.hpp"
#include "pisrl/policy_improvement.hpp"

namespace pisrl {

struct EnvBundle {
  std::unique_ptr<Environment> env;
  std::unique_ptr<Teacher> teacher;
};

// Instantiates the configured environment and its teacher, applying any
// car.* / pole.* parameter overrides from the config.
EnvBundle make_environment(const ExperimentConfig& config);

struct ResolvedParameters {
  double density_threshold = 0.0;
  std::uint64_t capacity = 0;
};

// Runs teacher episodes and applies the trajectory-based estimators for any
// parameter the config left on 'auto'.
ResolvedParameters resolve_parameters(const ExperimentConfig& config, Environment& env,
                                      const Teacher& teacher, std::uint64_t replica_seed);

struct PipelineResult {
  RunMetrics metrics;
  double clone_eval_mean = 0.0;
  double improve_mean = 0.0;
  std::size_t improve_failures = 0;
  std::size_t final_base_size = 0;
  ResolvedParameters parameters;
};

// Full experiment for one replica: clone, evaluate the clone, value the
// cases by Monte Carlo, then improve. Writes per-phase CSVs, a summary CSV
// and the case-base after every phase into the given directory. A phase
// fault leaves an INCOMPLETE marker file with the error text.
PipelineResult run_pipeline(const ExperimentConfig& config, std::uint64_t replica_seed,
                            const std::filesystem::path& out_dir);

struct SweepCell {
  double sigma = 0.0;
  std::uint64_t replica = 0;
  double improve_mean = 0.0;
  std::size_t improve_failures = 0;
};

struct SweepRow {
  double sigma = 0.0;
  std::size_t replicas = 0;
  double mean_failures = 0.0;
  double stddev_failures = 0.0;
  double mean_reward = 0.0;
  double stddev_reward = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepRow> rows;
};

// One pipeline per (sigma, replica); replica seeds are master_seed + index.
// Emits sweep_summary.csv in the output directory.
SweepResult sweep(const ExperimentConfig& config);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Indices of points not strictly dominated under (fewer failures, higher
// reward). Duplicates survive together.
std::vector<std::size_t> pareto_front(const std::vector<std::pair<double, double>>& points);

// CSV of all case states with value and use count, for plotting the known
// space.
void export_known_space(const CaseBase& base, const std::filesystem::path& out_file);

}  // namespace pisrl

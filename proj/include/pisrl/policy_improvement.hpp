#pragma once

#include <optional>

#include "pisrl/case_base.hpp"
#include "pisrl/environment.hpp"

namespace pisrl {

// One step of an improvement episode. Known steps carry the matched case's
// state and value verbatim plus the perturbed action that was executed;
// unknown steps carry the raw observed state, the teacher action, and a
// value filled in afterwards from the episode's rewards.
struct EpisodeCaseRecord {
  Vec state;
  Vec action;
  double value = 0.0;
  bool known = false;
  std::optional<std::size_t> base_index;
  std::size_t step = 0;
  double reward = 0.0;
};

struct GeneratedEpisode {
  std::vector<EpisodeCaseRecord> records;
  double total_reward = 0.0;
  bool failure = false;
};

struct ImprovementState {
  double max_total_reward = 0.0;
  std::size_t episodes_run = 0;
  std::size_t episodes_accepted = 0;
  std::size_t failures = 0;
};

struct UpdateCounts {
  std::size_t replacements = 0;  // updates that changed a stored action
  std::size_t insertions = 0;
  std::size_t evictions = 0;
};

// One TD-gate evaluation during apply_updates, for instrumentation.
struct DeltaEvent {
  std::size_t case_index = 0;
  double delta = 0.0;
  bool updated = false;  // action/value written (delta > 0)
};

GeneratedEpisode generate_episode(CaseBase& base, Environment& env, const Teacher& teacher,
                                  double sigma, Rng& env_rng, Rng& explore_rng,
                                  std::size_t max_steps);

// Fills unknown records with the discounted return from their first
// occurrence in the episode; repeats of the same unknown state share the
// first occurrence's return.
void value_unknowns(std::vector<EpisodeCaseRecord>& records, double gamma);

// Episode gate: accepts iff total_reward > max_total_reward - threshold, and
// on acceptance raises max_total_reward to the episode's total if higher.
bool accept_episode(double total_reward, ImprovementState& state, double update_threshold);

// Applies an accepted episode to the base, in step order: known records get
// a TD check (delta = r + gamma*V(next record) - V(case), next value 0 past
// episode end) and overwrite the case's action/value only when delta > 0;
// unknown records are inserted as new cases. Ends with eviction to capacity.
UpdateCounts apply_updates(CaseBase& base, const std::vector<EpisodeCaseRecord>& records,
                           double gamma, double alpha, std::uint64_t capacity,
                           std::vector<DeltaEvent>* trace = nullptr);

struct ImproveOptions {
  std::size_t episodes = 500;
  double sigma = 0.0;
  double gamma = 0.95;
  double alpha = 0.1;
  std::uint64_t capacity = 0;  // 0 = keep the base's capacity
  // Update threshold: fixed value, or 5% of |best episode reward| when auto.
  bool auto_update_threshold = true;
  double fixed_update_threshold = 0.0;
  double initial_max_total_reward = 0.0;
  std::size_t max_steps = 0;  // 0 = environment default
};

struct ImproveEpisodeRow {
  std::size_t episode = 0;
  std::size_t steps = 0;
  double total_reward = 0.0;
  bool failure = false;
  bool accepted = false;
  std::size_t teacher_steps = 0;  // unknown-state fallbacks
  std::size_t base_size = 0;
  std::size_t replacements = 0;
  std::size_t insertions = 0;
  std::size_t evictions = 0;
  std::uint64_t base_version = 0;  // mutation version after the episode
};

struct ImproveResult {
  ImprovementState state;
  std::vector<ImproveEpisodeRow> episodes;
};

ImproveResult improve(CaseBase& base, Environment& env, const Teacher& teacher,
                      const ImproveOptions& options, Rng& env_rng, Rng& explore_rng,
                      std::vector<DeltaEvent>* trace = nullptr);

}  // namespace pisrl

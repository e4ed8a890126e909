#pragma once

#include "pisrl/case_base.hpp"
#include "pisrl/environment.hpp"

namespace pisrl {

struct CloneLimits {
  std::size_t max_episodes = 100;
  std::size_t stop_window = 10;       // episodes in the convergence window
  double stop_teacher_fraction = 0.01;
};

struct CloningEpisode {
  std::size_t steps_total = 0;
  std::size_t steps_teacher = 0;
  std::size_t steps_case = 0;
  double cumulative_reward = 0.0;
  bool failure = false;
  std::size_t base_size = 0;  // after end-of-episode eviction
  std::size_t inserted = 0;
};

struct CloningReport {
  std::size_t episodes_run = 0;
  std::vector<CloningEpisode> episodes;
  std::size_t final_base_size = 0;
  bool aborted_on_failure = false;

  // Teacher-step share over the trailing window ending at `last` (inclusive).
  double teacher_fraction(std::size_t last, std::size_t window) const;
};

// Builds a case-based policy that mimics the teacher: known states replay the
// stored action, unknown states consult the teacher and store the new case
// with value 0. Eviction to capacity runs after every episode. Stops once the
// windowed teacher-step fraction drops below the limit, at the episode cap,
// or immediately after a failure episode.
std::pair<CaseBase, CloningReport> clone_behavior(Environment& env, const Teacher& teacher,
                                                  double density_threshold,
                                                  std::uint64_t capacity,
                                                  const CloneLimits& limits, Rng& env_rng);

// Store-everything baseline: every teacher step of every episode becomes a
// case, with no density gate and no eviction.
CaseBase ib1_clone(Environment& env, const Teacher& teacher, std::size_t episodes,
                   double density_threshold, Rng& env_rng);

struct EvalEpisode {
  std::size_t steps = 0;
  std::size_t steps_teacher = 0;
  double cumulative_reward = 0.0;
  bool failure = false;
};

// Read-only rollout of the case-based policy; neither case contents nor use
// counts change. With a teacher, unknown states fall back to it; without one
// the nearest action is always executed.
std::vector<EvalEpisode> evaluate_policy(const CaseBase& base, Environment& env,
                                         const Teacher* teacher, std::size_t episodes,
                                         Rng& env_rng);

double mean_reward(const std::vector<EvalEpisode>& episodes);

}  // namespace pisrl

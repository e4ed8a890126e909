#include "pisrl/behavior_cloning.hpp"

#include <limits>
#include <numeric>

namespace pisrl {

double CloningReport::teacher_fraction(std::size_t last, std::size_t window) const {
  if (episodes.empty() || last >= episodes.size()) return 1.0;
  const std::size_t first = last + 1 >= window ? last + 1 - window : 0;
  std::size_t teacher = 0, total = 0;
  for (std::size_t i = first; i <= last; ++i) {
    teacher += episodes[i].steps_teacher;
    total += episodes[i].steps_total;
  }
  return total == 0 ? 1.0 : static_cast<double>(teacher) / static_cast<double>(total);
}

std::pair<CaseBase, CloningReport> clone_behavior(Environment& env, const Teacher& teacher,
                                                  double density_threshold,
                                                  std::uint64_t capacity,
                                                  const CloneLimits& limits, Rng& env_rng) {
  CaseBase base(env.state_dim(), env.action_dim(), density_threshold, capacity);
  CloningReport report;

  for (std::size_t episode = 0; episode < limits.max_episodes; ++episode) {
    CloningEpisode row;
    Vec state = env.reset(env_rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      Vec action;
      const auto hit = base.nearest(state);
      if (hit && hit->distance <= base.density_threshold()) {
        base.record_use(hit->case_index);
        action = base.at(hit->case_index).action;
        ++row.steps_case;
      } else {
        action = teacher.action(state);
        base.insert(state, action, 0.0);
        ++row.inserted;
        ++row.steps_teacher;
      }
      StepOutcome outcome = env.step(state, action, env_rng);
      ++row.steps_total;
      row.cumulative_reward += outcome.reward;
      state = std::move(outcome.next_state);
      if (outcome.terminal) {
        row.failure = outcome.failure;
        break;
      }
    }
    base.evict_to_capacity();
    row.base_size = base.size();
    report.episodes.push_back(row);
    ++report.episodes_run;

    if (row.failure) {
      report.aborted_on_failure = true;
      break;
    }
    if (report.episodes_run >= limits.stop_window &&
        report.teacher_fraction(report.episodes_run - 1, limits.stop_window) <
            limits.stop_teacher_fraction) {
      break;
    }
  }
  report.final_base_size = base.size();
  return {std::move(base), std::move(report)};
}

CaseBase ib1_clone(Environment& env, const Teacher& teacher, std::size_t episodes,
                   double density_threshold, Rng& env_rng) {
  CaseBase base(env.state_dim(), env.action_dim(), density_threshold,
                std::numeric_limits<std::uint64_t>::max() / 2);
  for (std::size_t episode = 0; episode < episodes; ++episode) {
    Vec state = env.reset(env_rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      Vec action = teacher.action(state);
      base.insert(state, action, 0.0);
      StepOutcome outcome = env.step(state, action, env_rng);
      state = std::move(outcome.next_state);
      if (outcome.terminal) break;
    }
  }
  base.set_capacity(std::max<std::uint64_t>(1, base.size()));
  return base;
}

std::vector<EvalEpisode> evaluate_policy(const CaseBase& base, Environment& env,
                                         const Teacher* teacher, std::size_t episodes,
                                         Rng& env_rng) {
  std::vector<EvalEpisode> rows;
  rows.reserve(episodes);
  for (std::size_t episode = 0; episode < episodes; ++episode) {
    EvalEpisode row;
    Vec state = env.reset(env_rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      Vec action;
      const auto hit = base.nearest(state);
      const bool known = hit && hit->distance <= base.density_threshold();
      if (known || (teacher == nullptr && hit)) {
        action = base.at(hit->case_index).action;
      } else if (teacher != nullptr) {
        action = teacher->action(state);
        ++row.steps_teacher;
      } else {
        throw NoPolicyError();
      }
      StepOutcome outcome = env.step(state, action, env_rng);
      ++row.steps;
      row.cumulative_reward += outcome.reward;
      state = std::move(outcome.next_state);
      if (outcome.terminal) {
        row.failure = outcome.failure;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

double mean_reward(const std::vector<EvalEpisode>& episodes) {
  if (episodes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : episodes) sum += e.cumulative_reward;
  return sum / static_cast<double>(episodes.size());
}

}  // namespace pisrl

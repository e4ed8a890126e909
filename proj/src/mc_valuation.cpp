#include "pisrl/mc_valuation.hpp"

#include <stdexcept>
#include <unordered_map>

namespace pisrl {

double discounted_return(const std::vector<double>& rewards, std::size_t start_index,
                         double gamma) {
  if (start_index >= rewards.size()) {
    throw std::out_of_range("discounted_return: start index past end of rewards");
  }
  double sum = 0.0;
  for (std::size_t j = rewards.size(); j-- > start_index;) {
    sum = rewards[j] + gamma * sum;
  }
  return sum;
}

std::vector<McEpisode> mc_evaluate(CaseBase& base, Environment& env, const Teacher& teacher,
                                   double gamma, std::size_t episodes, Rng& env_rng) {
  if (base.empty()) throw NoPolicyError();

  // Return lists persist across the episodes of this valuation pass.
  std::unordered_map<std::size_t, std::vector<double>> returns;
  std::vector<McEpisode> rows;
  rows.reserve(episodes);

  for (std::size_t episode = 0; episode < episodes; ++episode) {
    McEpisode row;
    std::vector<double> rewards;
    // case index -> step of first retrieval this episode
    std::unordered_map<std::size_t, std::size_t> first_visit;

    Vec state = env.reset(env_rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      Vec action;
      const auto hit = base.nearest(state);
      if (hit && hit->distance <= base.density_threshold()) {
        action = base.at(hit->case_index).action;
        first_visit.emplace(hit->case_index, k);
      } else {
        action = teacher.action(state);
        ++row.steps_teacher;
      }
      StepOutcome outcome = env.step(state, action, env_rng);
      rewards.push_back(outcome.reward);
      ++row.steps;
      row.cumulative_reward += outcome.reward;
      state = std::move(outcome.next_state);
      if (outcome.terminal) {
        row.failure = outcome.failure;
        break;
      }
    }

    for (const auto& [case_index, step] : first_visit) {
      auto& list = returns[case_index];
      list.push_back(discounted_return(rewards, step, gamma));
      double sum = 0.0;
      for (double r : list) sum += r;
      base.set_value(case_index, sum / static_cast<double>(list.size()));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pisrl

#pragma once

#include "pisrl/case_base.hpp"
#include "pisrl/environment.hpp"

namespace pisrl {

// Sum_{j>=start} gamma^(j-start) * rewards[j].
double discounted_return(const std::vector<double>& rewards, std::size_t start_index,
                         double gamma);

struct McEpisode {
  std::size_t steps = 0;
  std::size_t steps_teacher = 0;
  double cumulative_reward = 0.0;
  bool failure = false;
};

// First-visit Monte-Carlo valuation of the case-based policy. Episodes run
// greedily over the base (teacher handles unknown states); the first
// retrieval of a case in an episode contributes the discounted return from
// that step to the case's return list, and the case value becomes the mean
// of its list. Case membership, states, actions and use counts are untouched.
std::vector<McEpisode> mc_evaluate(CaseBase& base, Environment& env, const Teacher& teacher,
                                   double gamma, std::size_t episodes, Rng& env_rng);

}  // namespace pisrl

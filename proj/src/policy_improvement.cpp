#include "pisrl/policy_improvement.hpp"

#include <cmath>
#include <cstring>
#include <unordered_map>

#include "pisrl/mc_valuation.hpp"
#include "pisrl/parameter_estimation.hpp"

namespace pisrl {

GeneratedEpisode generate_episode(CaseBase& base, Environment& env, const Teacher& teacher,
                                  double sigma, Rng& env_rng, Rng& explore_rng,
                                  std::size_t max_steps) {
  if (base.empty()) throw NoPolicyError();
  GeneratedEpisode ep;
  Vec state = env.reset(env_rng);
  for (std::size_t k = 0; k < max_steps; ++k) {
    EpisodeCaseRecord rec;
    rec.step = k;
    Vec action;
    const auto hit = base.nearest(state);
    if (hit->distance <= base.density_threshold()) {
      const Case& matched = base.at(hit->case_index);
      base.record_use(hit->case_index);
      action = perturb_action(matched.action, sigma, env.action_domain(), explore_rng);
      rec.state = matched.state;
      rec.value = matched.value;
      rec.known = true;
      rec.base_index = hit->case_index;
    } else {
      action = teacher.action(state);
      rec.state = state;
      rec.value = 0.0;
      rec.known = false;
    }
    rec.action = action;
    StepOutcome outcome = env.step(state, action, env_rng);
    rec.reward = outcome.reward;
    ep.total_reward += outcome.reward;
    ep.records.push_back(std::move(rec));
    state = std::move(outcome.next_state);
    if (outcome.terminal) {
      ep.failure = outcome.failure;
      break;
    }
  }
  return ep;
}

namespace {

struct StateHash {
  std::size_t operator()(const Vec& v) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double d : v) {
      const double canon = d == 0.0 ? 0.0 : d;  // merge +0/-0 with operator==
      std::uint64_t bits;
      std::memcpy(&bits, &canon, sizeof bits);
      h ^= bits;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

void value_unknowns(std::vector<EpisodeCaseRecord>& records, double gamma) {
  std::vector<double> rewards;
  rewards.reserve(records.size());
  for (const auto& r : records) rewards.push_back(r.reward);

  // First occurrence of each exact unknown state decides its return.
  std::unordered_map<Vec, std::size_t, StateHash> first_occurrence;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].known) continue;
    const auto it = first_occurrence.emplace(records[i].state, i).first;
    records[i].value = discounted_return(rewards, it->second, gamma);
  }
}

bool accept_episode(double total_reward, ImprovementState& state, double update_threshold) {
  if (!(total_reward > state.max_total_reward - update_threshold)) return false;
  state.max_total_reward = std::max(state.max_total_reward, total_reward);
  return true;
}

UpdateCounts apply_updates(CaseBase& base, const std::vector<EpisodeCaseRecord>& records,
                           double gamma, double alpha, std::uint64_t capacity,
                           std::vector<DeltaEvent>* trace) {
  UpdateCounts counts;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpisodeCaseRecord& rec = records[i];
    if (rec.known) {
      if (!rec.base_index || *rec.base_index >= base.size() ||
          base.at(*rec.base_index).state != rec.state) {
        throw std::logic_error("apply_updates: episode record does not match its base case");
      }
      const std::size_t idx = *rec.base_index;
      const double next_value = i + 1 < records.size() ? records[i + 1].value : 0.0;
      const double delta = rec.reward + gamma * next_value - base.at(idx).value;
      const bool positive = delta > 0.0;
      if (positive) {
        const bool action_changed = base.at(idx).action != rec.action;
        base.replace(idx, rec.action, base.at(idx).value + alpha * delta);
        if (action_changed) ++counts.replacements;
      }
      if (trace) trace->push_back(DeltaEvent{idx, delta, positive});
    } else {
      base.insert(rec.state, rec.action, rec.value);
      ++counts.insertions;
    }
  }
  base.set_capacity(capacity);
  counts.evictions = base.evict_to_capacity();
  return counts;
}

ImproveResult improve(CaseBase& base, Environment& env, const Teacher& teacher,
                      const ImproveOptions& options, Rng& env_rng, Rng& explore_rng,
                      std::vector<DeltaEvent>* trace) {
  ImproveResult result;
  result.state.max_total_reward = options.initial_max_total_reward;
  const std::size_t max_steps =
      options.max_steps > 0 ? options.max_steps : env.max_episode_steps();
  const std::uint64_t capacity = options.capacity > 0 ? options.capacity : base.capacity();

  for (std::size_t episode = 0; episode < options.episodes; ++episode) {
    GeneratedEpisode ep =
        generate_episode(base, env, teacher, options.sigma, env_rng, explore_rng, max_steps);
    value_unknowns(ep.records, options.gamma);

    const double threshold = options.auto_update_threshold
                                 ? compute_update_threshold(result.state.max_total_reward)
                                 : options.fixed_update_threshold;
    const bool accepted = accept_episode(ep.total_reward, result.state, threshold);

    ImproveEpisodeRow row;
    row.episode = episode;
    row.steps = ep.records.size();
    row.total_reward = ep.total_reward;
    row.failure = ep.failure;
    row.accepted = accepted;
    for (const auto& rec : ep.records) {
      if (!rec.known) ++row.teacher_steps;
    }
    if (accepted) {
      const UpdateCounts counts =
          apply_updates(base, ep.records, options.gamma, options.alpha, capacity, trace);
      row.replacements = counts.replacements;
      row.insertions = counts.insertions;
      row.evictions = counts.evictions;
      ++result.state.episodes_accepted;
    }
    row.base_size = base.size();
    row.base_version = base.mutation_version();
    ++result.state.episodes_run;
    if (ep.failure) ++result.state.failures;
    result.episodes.push_back(row);
  }
  return result;
}

}  // namespace pisrl

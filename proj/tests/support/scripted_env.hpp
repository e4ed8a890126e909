#pragma once

#include <stdexcept>
#include <vector>

#include "pisrl/environment.hpp"

namespace pisrl::testing {

// Predetermined episode: the environment walks through `states`
// (states[0] is the reset state) handing out `rewards` step by step,
// ignoring actions entirely. rewards.size() == states.size() - 1.
struct Script {
  std::vector<Vec> states;
  std::vector<double> rewards;
  bool end_in_failure = false;
};

// Replays a list of scripts, one per reset, cycling when exhausted. Useful
// when a test needs full control over the trajectory a policy "generates".
class ScriptedEnv : public Environment {
 public:
  ScriptedEnv(std::vector<Script> scripts, std::size_t state_dim, std::size_t action_dim = 1)
      : scripts_(std::move(scripts)),
        state_dim_(state_dim),
        action_dim_(action_dim),
        domain_{{-1e9, 1e9}} {
    if (scripts_.empty()) throw std::invalid_argument("ScriptedEnv needs scripts");
    for (const auto& s : scripts_) {
      if (s.states.size() != s.rewards.size() + 1 || s.states.empty()) {
        throw std::invalid_argument("ScriptedEnv: bad script shape");
      }
    }
  }

  std::size_t state_dim() const override { return state_dim_; }
  std::size_t action_dim() const override { return action_dim_; }
  const std::vector<Interval>& action_domain() const override { return domain_; }
  std::size_t max_episode_steps() const override {
    std::size_t longest = 0;
    for (const auto& s : scripts_) longest = std::max(longest, s.rewards.size());
    return longest + 1;
  }

  Vec reset(Rng&) override {
    current_ = next_script_ % scripts_.size();
    ++next_script_;
    step_ = 0;
    return scripts_[current_].states.front();
  }

  StepOutcome step(const Vec&, const Vec&, Rng&) override {
    const Script& s = scripts_[current_];
    if (step_ >= s.rewards.size()) throw std::logic_error("ScriptedEnv: stepped past script");
    StepOutcome out;
    out.reward = s.rewards[step_];
    out.next_state = s.states[step_ + 1];
    ++step_;
    if (step_ == s.rewards.size()) {
      out.terminal = true;
      out.failure = s.end_in_failure;
    }
    return out;
  }

  std::size_t episodes_started() const { return next_script_; }

 private:
  std::vector<Script> scripts_;
  std::size_t state_dim_;
  std::size_t action_dim_;
  std::vector<Interval> domain_;
  std::size_t current_ = 0;
  std::size_t next_script_ = 0;
  std::size_t step_ = 0;
};

// Teacher returning a fixed linear function of the state's first component.
class LinearTeacher : public Teacher {
 public:
  LinearTeacher(double scale, double offset, std::size_t action_dim = 1)
      : scale_(scale), offset_(offset), action_dim_(action_dim) {}

  Vec action(const Vec& state) const override {
    return Vec(action_dim_, scale_ * state[0] + offset_);
  }

 private:
  double scale_;
  double offset_;
  std::size_t action_dim_;
};

}  // namespace pisrl::testing

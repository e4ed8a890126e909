#pragma once

#include <cstddef>
#include <vector>

#include "pisrl/exploration.hpp"
#include "pisrl/rng.hpp"

namespace pisrl {

// Result of one environment step. A failure is always terminal; a terminal
// without failure ends the episode normally.
struct StepOutcome {
  Vec next_state;
  double reward = 0.0;
  bool terminal = false;
  bool failure = false;
};

// Episodic continuous-control task. step() receives the current state
// explicitly; built-in environments keep no per-episode state of their own,
// which makes them safe to drive from any loop.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual const std::vector<Interval>& action_domain() const = 0;

  // Hard per-episode step cap; hitting it is a non-failure termination
  // enforced by the episode loop.
  virtual std::size_t max_episode_steps() const = 0;

  virtual Vec reset(Rng& rng) = 0;
  virtual StepOutcome step(const Vec& state, const Vec& action, Rng& rng) = 0;
};

// Deterministic baseline controller, total over the state space.
class Teacher {
 public:
  virtual ~Teacher() = default;
  virtual Vec action(const Vec& state) const = 0;
};

}  // namespace pisrl

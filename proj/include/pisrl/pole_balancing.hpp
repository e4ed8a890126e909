#pragma once

#include "pisrl/environment.hpp"

namespace pisrl {

// Cart-pole with a continuous force action. State is (angle, angular
// velocity, cart position, cart velocity). Reward per step is
// 1 - (angle_frac + position_frac)/2 with each fraction clipped to [0, 1];
// exceeding the angle or track limit is a terminal failure.
struct PoleBalancingParams {
  double angle_limit = 12.0 * M_PI / 180.0;  // rad
  double track_limit = 2.4;                  // m
  std::size_t episode_steps = 10000;

  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_half_length = 0.5;
  double gravity = 9.8;
  double timestep = 0.02;
  double force_limit = 10.0;

  double action_noise_std = 1e-4;
  double reward_noise_std = 1e-4;
  double reset_jitter = 0.05;  // uniform +/- on each state component
};

class PoleBalancingEnv : public Environment {
 public:
  explicit PoleBalancingEnv(PoleBalancingParams params = {});

  std::size_t state_dim() const override { return 4; }
  std::size_t action_dim() const override { return 1; }
  const std::vector<Interval>& action_domain() const override { return action_domain_; }
  std::size_t max_episode_steps() const override { return params_.episode_steps; }

  Vec reset(Rng& rng) override;
  StepOutcome step(const Vec& state, const Vec& action, Rng& rng) override;

  const PoleBalancingParams& params() const { return params_; }

  double reward_for(double angle, double position) const;

 private:
  PoleBalancingParams params_;
  std::vector<Interval> action_domain_;
};

// Linear full-state feedback with deliberately weak cart gains: it keeps the
// pole up from any jittered start but recenters the cart slowly.
class PoleTeacher : public Teacher {
 public:
  PoleTeacher(const PoleBalancingParams& params, double angle_gain = 35.0,
              double angular_velocity_gain = 7.5, double position_gain = 0.6,
              double velocity_gain = 1.6);

  Vec action(const Vec& state) const override;

 private:
  double force_limit_;
  double k_angle_, k_angular_velocity_, k_position_, k_velocity_;
};

}  // namespace pisrl

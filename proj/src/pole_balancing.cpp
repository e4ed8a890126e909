#include "pisrl/pole_balancing.hpp"

#include <algorithm>
#include <cmath>

namespace pisrl {

PoleBalancingEnv::PoleBalancingEnv(PoleBalancingParams params)
    : params_(params), action_domain_{{-params.force_limit, params.force_limit}} {}

Vec PoleBalancingEnv::reset(Rng& rng) {
  Vec state(4, 0.0);
  if (params_.reset_jitter > 0.0) {
    std::uniform_real_distribution<double> jitter(-params_.reset_jitter,
                                                  params_.reset_jitter);
    for (double& v : state) v = jitter(rng);
  }
  return state;
}

double PoleBalancingEnv::reward_for(double angle, double position) const {
  const double angle_frac = std::min(std::fabs(angle) / params_.angle_limit, 1.0);
  const double pos_frac = std::min(std::fabs(position) / params_.track_limit, 1.0);
  return 1.0 - 0.5 * (angle_frac + pos_frac);
}

StepOutcome PoleBalancingEnv::step(const Vec& state, const Vec& action, Rng& rng) {
  const double angle = state[0];
  const double angular_velocity = state[1];
  const double position = state[2];
  const double velocity = state[3];

  double force = std::clamp(action[0], -params_.force_limit, params_.force_limit);
  if (params_.action_noise_std > 0.0) {
    force += gaussian(rng, 0.0, params_.action_noise_std);
  }

  const double total_mass = params_.cart_mass + params_.pole_mass;
  const double pole_mass_length = params_.pole_mass * params_.pole_half_length;
  const double cos_a = std::cos(angle);
  const double sin_a = std::sin(angle);
  const double temp =
      (force + pole_mass_length * angular_velocity * angular_velocity * sin_a) / total_mass;
  const double angular_accel =
      (params_.gravity * sin_a - cos_a * temp) /
      (params_.pole_half_length * (4.0 / 3.0 - params_.pole_mass * cos_a * cos_a / total_mass));
  const double accel = temp - pole_mass_length * angular_accel * cos_a / total_mass;

  const double dt = params_.timestep;
  StepOutcome out;
  out.next_state = {angle + dt * angular_velocity, angular_velocity + dt * angular_accel,
                    position + dt * velocity, velocity + dt * accel};

  const double next_angle = out.next_state[0];
  const double next_position = out.next_state[2];
  out.failure = std::fabs(next_angle) > params_.angle_limit ||
                std::fabs(next_position) > params_.track_limit;
  out.terminal = out.failure;
  out.reward = reward_for(next_angle, next_position);
  if (params_.reward_noise_std > 0.0) {
    out.reward += gaussian(rng, 0.0, params_.reward_noise_std);
  }
  return out;
}

PoleTeacher::PoleTeacher(const PoleBalancingParams& params, double angle_gain,
                         double angular_velocity_gain, double position_gain,
                         double velocity_gain)
    : force_limit_(params.force_limit),
      k_angle_(angle_gain),
      k_angular_velocity_(angular_velocity_gain),
      k_position_(position_gain),
      k_velocity_(velocity_gain) {}

Vec PoleTeacher::action(const Vec& state) const {
  const double force = k_angle_ * state[0] + k_angular_velocity_ * state[1] +
                       k_position_ * state[2] + k_velocity_ * state[3];
  return {std::clamp(force, -force_limit_, force_limit_)};
}

}  // namespace pisrl

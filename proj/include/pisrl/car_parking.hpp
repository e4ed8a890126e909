#pragma once

#include <array>

#include "pisrl/environment.hpp"

namespace pisrl {

struct Rect {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  double cx() const { return 0.5 * (x_min + x_max); }
  double cy() const { return 0.5 * (y_min + y_max); }
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

// Kinematic car driven by a steering command in [-1, 1] at constant speed.
// State is (x, y, heading). The episode ends with reward 10*(1 - zeta) when
// the car body is entirely inside the garage, and with reward -1 (failure)
// when it touches the driving-area boundary or the obstacle.
struct CarParkingParams {
  double length = 4.0;        // car length (m)
  double width = 2.0;         // car width (m), length/2 by default
  double speed = 1.0;         // constant forward speed (m/s)
  double max_steering = 0.78; // steering angle at full command (rad)
  double timestep = 0.5;      // integration step (s)

  double start_x = 4.0, start_y = 4.0, start_heading = 0.26;
  double goal_x = 22.5, goal_y = 13.5;

  Rect driving_area{0.0, 25.0, 0.0, 18.0};
  Rect garage{20.0, 25.0, 11.0, 16.0};
  Rect obstacle{11.0, 15.0, 6.0, 12.0};

  double action_noise_std = 0.1;
  double reward_noise_std = 0.1;
  std::size_t max_steps = 200;
  double step_reward = -0.1;
  double collision_reward = -1.0;
  double goal_reward_scale = 10.0;
};

class CarParkingEnv : public Environment {
 public:
  explicit CarParkingEnv(CarParkingParams params = {});

  std::size_t state_dim() const override { return 3; }
  std::size_t action_dim() const override { return 1; }
  const std::vector<Interval>& action_domain() const override { return action_domain_; }
  std::size_t max_episode_steps() const override { return params_.max_steps; }

  Vec reset(Rng& rng) override;
  StepOutcome step(const Vec& state, const Vec& action, Rng& rng) override;

  const CarParkingParams& params() const { return params_; }

  // Corners of the car body at the given pose, counterclockwise.
  std::array<std::array<double, 2>, 4> body_corners(double x, double y, double heading) const;
  bool body_inside(const Rect& rect, double x, double y, double heading) const;
  bool body_intersects(const Rect& rect, double x, double y, double heading) const;

  // Distance-to-goal normalizer: distance over the farthest driving-area
  // corner from the garage center, clipped to [0, 1].
  double goal_distance_normalized(double x, double y) const;

 private:
  CarParkingParams params_;
  std::vector<Interval> action_domain_;
  double zeta_scale_;
};

// Waypoint follower for a fixed path around the obstacle's upper side.
// Stateless: the chased point is derived from the projection of the current
// position onto the path. It aims straight at each corner and understeers,
// so it overshoots and corrects after every turn — safe everywhere on the
// map, but a naive driver whose line through corners wastes steps.
class CarTeacher : public Teacher {
 public:
  explicit CarTeacher(const CarParkingParams& params, double corner_advance = 0.5,
                      double understeer = 0.55);

  Vec action(const Vec& state) const override;

  const std::vector<std::array<double, 2>>& path() const { return path_; }

 private:
  std::array<double, 2> target_point(double x, double y) const;

  std::vector<std::array<double, 2>> path_;
  std::vector<double> cumulative_length_;
  double corner_advance_;
  double understeer_;
  double turn_per_step_;   // heading change at full steering command
  double max_steering_;
};

}  // namespace pisrl

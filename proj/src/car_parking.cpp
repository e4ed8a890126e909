#include "pisrl/car_parking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pisrl {

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

CarParkingEnv::CarParkingEnv(CarParkingParams params)
    : params_(params), action_domain_{{-1.0, 1.0}} {
  const double gx = params_.garage.cx();
  const double gy = params_.garage.cy();
  double far = 0.0;
  for (double cx : {params_.driving_area.x_min, params_.driving_area.x_max}) {
    for (double cy : {params_.driving_area.y_min, params_.driving_area.y_max}) {
      far = std::max(far, std::hypot(cx - gx, cy - gy));
    }
  }
  zeta_scale_ = far;
}

Vec CarParkingEnv::reset(Rng&) {
  return {params_.start_x, params_.start_y, params_.start_heading};
}

std::array<std::array<double, 2>, 4> CarParkingEnv::body_corners(double x, double y,
                                                                 double heading) const {
  const double hl = 0.5 * params_.length;
  const double hw = 0.5 * params_.width;
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {{{x + hl * c - hw * s, y + hl * s + hw * c},
           {x - hl * c - hw * s, y - hl * s + hw * c},
           {x - hl * c + hw * s, y - hl * s - hw * c},
           {x + hl * c + hw * s, y + hl * s - hw * c}}};
}

bool CarParkingEnv::body_inside(const Rect& rect, double x, double y, double heading) const {
  for (const auto& corner : body_corners(x, y, heading)) {
    if (!rect.contains(corner[0], corner[1])) return false;
  }
  return true;
}

bool CarParkingEnv::body_intersects(const Rect& rect, double x, double y,
                                    double heading) const {
  // Separating-axis test between the oriented car body and the axis-aligned
  // rectangle: axes are the two world axes and the two body axes.
  const auto corners = body_corners(x, y, heading);
  double bx_min = corners[0][0], bx_max = corners[0][0];
  double by_min = corners[0][1], by_max = corners[0][1];
  for (const auto& corner : corners) {
    bx_min = std::min(bx_min, corner[0]);
    bx_max = std::max(bx_max, corner[0]);
    by_min = std::min(by_min, corner[1]);
    by_max = std::max(by_max, corner[1]);
  }
  if (bx_max < rect.x_min || bx_min > rect.x_max || by_max < rect.y_min ||
      by_min > rect.y_max) {
    return false;
  }
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const std::array<std::array<double, 2>, 2> axes = {{{c, s}, {-s, c}}};
  const std::array<std::array<double, 2>, 4> rect_corners = {{{rect.x_min, rect.y_min},
                                                              {rect.x_max, rect.y_min},
                                                              {rect.x_max, rect.y_max},
                                                              {rect.x_min, rect.y_max}}};
  const auto project = [](const auto& points, const std::array<double, 2>& axis) {
    double lo = points[0][0] * axis[0] + points[0][1] * axis[1];
    double hi = lo;
    for (const auto& pt : points) {
      const double p = pt[0] * axis[0] + pt[1] * axis[1];
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    return std::array<double, 2>{lo, hi};
  };
  for (const auto& axis : axes) {
    const auto car_span = project(corners, axis);
    const auto rect_span = project(rect_corners, axis);
    if (car_span[1] < rect_span[0] || car_span[0] > rect_span[1]) return false;
  }
  return true;
}

double CarParkingEnv::goal_distance_normalized(double x, double y) const {
  const double d = std::hypot(x - params_.goal_x, y - params_.goal_y);
  return std::clamp(d / zeta_scale_, 0.0, 1.0);
}

StepOutcome CarParkingEnv::step(const Vec& state, const Vec& action, Rng& rng) {
  const double x = state[0];
  const double y = state[1];
  const double heading = state[2];
  double cmd = std::clamp(action[0], -1.0, 1.0);
  if (params_.action_noise_std > 0.0) {
    cmd += gaussian(rng, 0.0, params_.action_noise_std);
  }

  const double vt = params_.speed * params_.timestep;
  const double new_heading =
      heading + vt / (params_.length / 2.0) * std::tan(params_.max_steering * cmd);
  const double nx = x + vt * std::cos(new_heading);
  const double ny = y + vt * std::sin(new_heading);

  StepOutcome out;
  out.next_state = {nx, ny, new_heading};
  if (body_inside(params_.garage, nx, ny, new_heading)) {
    out.terminal = true;
    out.failure = false;
    out.reward = params_.goal_reward_scale * (1.0 - goal_distance_normalized(nx, ny));
  } else if (!body_inside(params_.driving_area, nx, ny, new_heading) ||
             body_intersects(params_.obstacle, nx, ny, new_heading)) {
    out.terminal = true;
    out.failure = true;
    out.reward = params_.collision_reward;
  } else {
    out.reward = params_.step_reward;
  }
  if (params_.reward_noise_std > 0.0) {
    out.reward += gaussian(rng, 0.0, params_.reward_noise_std);
  }
  return out;
}

CarTeacher::CarTeacher(const CarParkingParams& params, double corner_advance, double understeer)
    : corner_advance_(corner_advance),
      understeer_(understeer),
      turn_per_step_(params.speed * params.timestep / (params.length / 2.0)),
      max_steering_(params.max_steering) {
  // Deliberately roundabout L over the obstacle: straight up the left side,
  // a hard right at the top, then east along the high corridor, entering
  // the garage well above its center. Every corner is taken wide and the
  // whole line sits far inside the walls, so the route is safe but several
  // steps longer than a clean one.
  path_ = {{params.start_x, params.start_y},
           {5.2, 13.4},
           {10.2, 15.4},
           {14.2, 14.6},
           {17.2, 15.2},
           {19.8, 14.3},
           {21.5, 14.2},
           {22.5, 14.2}};
  cumulative_length_.resize(path_.size(), 0.0);
  for (std::size_t i = 1; i < path_.size(); ++i) {
    cumulative_length_[i] =
        cumulative_length_[i - 1] +
        std::hypot(path_[i][0] - path_[i - 1][0], path_[i][1] - path_[i - 1][1]);
  }
}

std::array<double, 2> CarTeacher::target_point(double x, double y) const {
  // Project onto the path polyline, then chase the point a short advance
  // past the current segment's end vertex. Aiming at corners instead of
  // rounding them early means the controller overshoots and corrects after
  // each one.
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_arc = 0.0;
  std::size_t best_seg = 0;
  for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
    const double ax = path_[i][0], ay = path_[i][1];
    const double bx = path_[i + 1][0], by = path_[i + 1][1];
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((x - ax) * dx + (y - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double px = ax + t * dx, py = ay + t * dy;
    const double d2 = (x - px) * (x - px) + (y - py) * (y - py);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_arc = cumulative_length_[i] + t * std::sqrt(len2);
      best_seg = i;
    }
  }
  (void)best_arc;
  const double arc = cumulative_length_[best_seg + 1] + corner_advance_;
  const double total = cumulative_length_.back();
  if (arc >= total) return path_.back();
  std::size_t seg = 0;
  while (seg + 1 < cumulative_length_.size() && cumulative_length_[seg + 1] < arc) ++seg;
  const double seg_len = cumulative_length_[seg + 1] - cumulative_length_[seg];
  const double t = seg_len > 0.0 ? (arc - cumulative_length_[seg]) / seg_len : 0.0;
  return {path_[seg][0] + t * (path_[seg + 1][0] - path_[seg][0]),
          path_[seg][1] + t * (path_[seg + 1][1] - path_[seg][1])};
}

Vec CarTeacher::action(const Vec& state) const {
  const auto target = target_point(state[0], state[1]);
  const double desired = std::atan2(target[1] - state[1], target[0] - state[0]);
  const double err = wrap_angle(desired - state[2]);
  // Invert the kinematics: a full command turns by turn_per_step_*tan(max_steering).
  const double cmd = std::atan(err / turn_per_step_) / max_steering_;
  return {std::clamp(understeer_ * cmd, -1.0, 1.0)};
}

}  // namespace pisrl

#include "pisrl/parameter_estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace pisrl {

double SigmaSchedule::value_at(std::size_t step) const {
  return initial * std::pow(multiplier, static_cast<double>(step));
}

double estimate_density_threshold(const Trajectory& trajectory) {
  const auto& s = trajectory.states;
  if (s.size() < 2) {
    throw std::invalid_argument("density threshold estimate needs at least two states");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) sum += distance(s[i], s[i + 1]);
  return sum / static_cast<double>(s.size() - 1);
}

namespace {

// floor of a ratio, forgiving values a hair below an integer so that e.g.
// a deviation of exactly three thresholds counts as three intervals.
std::uint64_t interval_count(double deviation, double threshold) {
  return static_cast<std::uint64_t>(std::floor(deviation / threshold + 1e-9));
}

}  // namespace

std::uint64_t estimate_capacity(const std::vector<Trajectory>& trajectories,
                                double density_threshold) {
  if (trajectories.empty()) {
    throw std::invalid_argument("capacity estimate needs at least one trajectory");
  }
  if (!(density_threshold > 0.0)) {
    throw std::invalid_argument("capacity estimate needs a positive density threshold");
  }
  const auto& reference = trajectories.front().states;
  std::uint64_t capacity = reference.size();
  for (std::size_t i = 0; i < reference.size(); ++i) {
    double max_deviation = 0.0;
    for (std::size_t j = 1; j < trajectories.size(); ++j) {
      const auto& other = trajectories[j].states;
      if (i >= other.size()) continue;
      max_deviation = std::max(max_deviation, distance(reference[i], other[i]));
    }
    capacity += interval_count(max_deviation, density_threshold);
  }
  return capacity;
}

double compute_update_threshold(double max_total_reward) {
  return 0.05 * std::fabs(max_total_reward);
}

}  // namespace pisrl

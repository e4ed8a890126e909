#pragma once

#include <cstdint>
#include <vector>

#include "pisrl/case_base.hpp"

namespace pisrl {

// State sequence from one teacher episode.
struct Trajectory {
  std::vector<Vec> states;
};

// Geometric escalation of the exploration stddev, from practically no risk
// upward until a run either improves enough or fails too much.
struct SigmaSchedule {
  double initial = 9e-7;
  double multiplier = 10.0;
  std::size_t max_steps = 8;

  double value_at(std::size_t step) const;
};

// Mean distance between consecutive states of one execution.
double estimate_density_threshold(const Trajectory& trajectory);

// Capacity estimate from aligned trajectories: the reference length plus,
// per step index, the number of threshold-wide intervals spanned by the
// worst deviation of any other trajectory from the reference at that index.
// Indices past a shorter trajectory's end do not contribute to its maximum.
std::uint64_t estimate_capacity(const std::vector<Trajectory>& trajectories,
                                double density_threshold);

// Episode-acceptance slack: 5% of the best cumulative reward's magnitude.
double compute_update_threshold(double max_total_reward);

}  // namespace pisrl

#include <doctest.h>

#include <algorithm>
#include <random>

#include "pisrl/parameter_estimation.hpp"

using namespace pisrl;

namespace {

Trajectory line_1d(const std::vector<double>& xs) {
  Trajectory t;
  for (double x : xs) t.states.push_back({x});
  return t;
}

}  // namespace

TEST_CASE("density threshold estimate is the mean consecutive distance") {
  CHECK(estimate_density_threshold(line_1d({0.0, 0.5, 1.0, 1.5})) == doctest::Approx(0.5));
  CHECK(estimate_density_threshold(line_1d({2.0, 5.0})) == doctest::Approx(3.0));
  CHECK(estimate_density_threshold(line_1d({0.0, 1.0, 3.0})) == doctest::Approx(1.5));
  CHECK_THROWS_AS(estimate_density_threshold(line_1d({1.0})), std::invalid_argument);
}

TEST_CASE("density threshold estimate ignores trajectory direction") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory t;
    for (int i = 0; i < 12; ++i) t.states.push_back({coord(rng), coord(rng)});
    Trajectory rev = t;
    std::reverse(rev.states.begin(), rev.states.end());
    CHECK(estimate_density_threshold(t) ==
          doctest::Approx(estimate_density_threshold(rev)).epsilon(1e-12));
  }
}

TEST_CASE("capacity estimate") {
  SUBCASE("identical trajectories need one case per state") {
    const Trajectory t = line_1d({0.0, 1.0, 2.0, 3.0});
    CHECK(estimate_capacity({t, t, t}, 0.5) == 4);
  }
  SUBCASE("a single trajectory has zero deviation") {
    const Trajectory t = line_1d({0.0, 1.0, 2.0});
    CHECK(estimate_capacity({t}, 0.25) == 3);
  }
  SUBCASE("worked deviation example") {
    // reference of two states; worst deviations 0.03 and 0.05 at threshold 0.01
    const Trajectory ref = line_1d({0.0, 1.0});
    const Trajectory other = line_1d({0.03, 1.05});
    CHECK(estimate_capacity({ref, other}, 0.01) == 2 + 3 + 5);
  }
  SUBCASE("shorter trajectories only contribute up to their length") {
    const Trajectory ref = line_1d({0.0, 1.0, 2.0});
    const Trajectory shorter = line_1d({0.2, 1.2});
    // deviations: 0.2, 0.2, (none) -> 2 + 2 + 0 intervals at 0.1
    CHECK(estimate_capacity({ref, shorter}, 0.1) == 3 + 2 + 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(estimate_capacity({}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_capacity({line_1d({0.0, 1.0})}, 0.0), std::invalid_argument);
  }
}

TEST_CASE("capacity estimate properties") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Trajectory> trajs(3);
    for (int i = 0; i < 10; ++i) {
      const double x = coord(rng), y = coord(rng);
      trajs[0].states.push_back({x, y});
      trajs[1].states.push_back({x + jitter(rng), y + jitter(rng)});
      trajs[2].states.push_back({x + jitter(rng), y + jitter(rng)});
    }
    const std::uint64_t n = trajs[0].states.size();

    // At least one case per reference state.
    const std::uint64_t eta_small = estimate_capacity(trajs, 0.013);
    CHECK(eta_small >= n);

    // Monotone non-increasing in the threshold.
    const std::uint64_t eta_mid = estimate_capacity(trajs, 0.13);
    const std::uint64_t eta_large = estimate_capacity(trajs, 1.3);
    CHECK(eta_small >= eta_mid);
    CHECK(eta_mid >= eta_large);

    // Equality with n exactly when every aligned deviation is below the
    // threshold (thresholds chosen off any deviation boundary).
    for (double threshold : {0.13, 1.3}) {
      bool all_below = true;
      for (std::size_t i = 0; i < trajs[0].states.size(); ++i) {
        for (std::size_t j = 1; j < trajs.size(); ++j) {
          if (distance(trajs[0].states[i], trajs[j].states[i]) >= threshold) all_below = false;
        }
      }
      CHECK((estimate_capacity(trajs, threshold) == n) == all_below);
    }
  }
}

TEST_CASE("update threshold is 5% of the best reward magnitude") {
  CHECK(compute_update_threshold(100.0) == doctest::Approx(5.0));
  CHECK(compute_update_threshold(0.0) == 0.0);
  const double threshold = compute_update_threshold(-13940.1);
  CHECK(threshold == doctest::Approx(697.005));
  // acceptance floor for a best episode of -13940.1
  CHECK(-13940.1 - threshold == doctest::Approx(-14637.105));
}

TEST_CASE("sigma schedule escalates geometrically") {
  const SigmaSchedule schedule;
  CHECK(schedule.value_at(0) == doctest::Approx(9e-7).epsilon(1e-12));
  CHECK(schedule.value_at(3) == doctest::Approx(9e-4).epsilon(1e-12));
  CHECK(schedule.value_at(5) == doctest::Approx(9e-2).epsilon(1e-12));
  const SigmaSchedule slow{1e-3, 2.0, 4};
  CHECK(slow.value_at(2) == doctest::Approx(4e-3));
}

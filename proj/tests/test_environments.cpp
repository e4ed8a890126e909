#include <doctest.h>

#include <cmath>

#include "pisrl/car_parking.hpp"
#include "pisrl/pole_balancing.hpp"

using namespace pisrl;

namespace {

CarParkingParams quiet_car() {
  CarParkingParams p;
  p.action_noise_std = 0.0;
  p.reward_noise_std = 0.0;
  return p;
}

PoleBalancingParams quiet_pole() {
  PoleBalancingParams p;
  p.action_noise_std = 0.0;
  p.reward_noise_std = 0.0;
  p.reset_jitter = 0.0;
  return p;
}

// Independent evaluation of the car motion equations.
Vec car_motion_oracle(const Vec& state, double command, const CarParkingParams& p) {
  const double heading =
      state[2] + p.speed * p.timestep / (p.length / 2.0) * std::tan(p.max_steering * command);
  return {state[0] + p.speed * p.timestep * std::cos(heading),
          state[1] + p.speed * p.timestep * std::sin(heading), heading};
}

}  // namespace

TEST_CASE("car reset is the fixed start pose") {
  CarParkingEnv env(quiet_car());
  Rng rng(1);
  CHECK(env.reset(rng) == Vec{4.0, 4.0, 0.26});
  Rng rng2(99);
  CHECK(env.reset(rng2) == Vec{4.0, 4.0, 0.26});
}

TEST_CASE("car one-step motion matches the independent oracle") {
  CarParkingEnv env(quiet_car());
  Rng rng(1);

  SUBCASE("zero steering keeps the heading") {
    const auto out = env.step({4.0, 4.0, 0.26}, {0.0}, rng);
    const Vec want = car_motion_oracle({4.0, 4.0, 0.26}, 0.0, env.params());
    CHECK(out.next_state[2] == 0.26);
    for (int i = 0; i < 3; ++i) {
      CHECK(out.next_state[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
    CHECK(out.next_state[0] == doctest::Approx(4.483195).epsilon(1e-6));
    CHECK(out.next_state[1] == doctest::Approx(4.128540).epsilon(1e-6));
    CHECK(out.reward == doctest::Approx(-0.1));
    CHECK_FALSE(out.terminal);
  }
  SUBCASE("full steering turns by the tangent law") {
    const auto out = env.step({4.0, 4.0, 0.26}, {1.0}, rng);
    CHECK(out.next_state[2] == doctest::Approx(0.26 + 0.25 * std::tan(0.78)).epsilon(1e-12));
    CHECK(out.next_state[2] == doctest::Approx(0.507315).epsilon(1e-5));
    const Vec want = car_motion_oracle({4.0, 4.0, 0.26}, 1.0, env.params());
    for (int i = 0; i < 3; ++i) {
      CHECK(out.next_state[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
  }
  SUBCASE("commands beyond the domain are clamped") {
    const auto full = env.step({4.0, 4.0, 0.26}, {1.0}, rng);
    const auto over = env.step({4.0, 4.0, 0.26}, {3.5}, rng);
    CHECK(over.next_state == full.next_state);
  }
}

TEST_CASE("car step length is exactly speed times timestep") {
  CarParkingEnv env(quiet_car());
  Rng rng(8);
  std::uniform_real_distribution<double> ux(2.0, 23.0), uy(2.0, 16.0), uh(-3.14, 3.14),
      ua(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec state = {ux(rng), uy(rng), uh(rng)};
    const auto out = env.step(state, {ua(rng)}, rng);
    const double moved = std::hypot(out.next_state[0] - state[0], out.next_state[1] - state[1]);
    CHECK(moved == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("car terminal outcomes") {
  CarParkingEnv env(quiet_car());
  Rng rng(1);

  SUBCASE("driving into the obstacle is a failure with reward -1") {
    // obstacle spans [11,15]x[6,12]; approach its left face heading east
    const auto out = env.step({8.6, 9.0, 0.0}, {0.0}, rng);
    CHECK(out.terminal);
    CHECK(out.failure);
    CHECK(out.reward == -1.0);
  }
  SUBCASE("leaving the driving area is a failure") {
    const auto out = env.step({2.4, 9.0, M_PI}, {0.0}, rng);
    CHECK(out.terminal);
    CHECK(out.failure);
    CHECK(out.reward == -1.0);
  }
  SUBCASE("parking entirely inside the garage succeeds") {
    const auto out = env.step({21.9, 13.5, 0.0}, {0.0}, rng);
    CHECK(out.terminal);
    CHECK_FALSE(out.failure);
    const double dist = std::hypot(out.next_state[0] - 22.5, out.next_state[1] - 13.5);
    const double zeta = dist / std::hypot(22.5, 13.5);
    CHECK(out.reward == doctest::Approx(10.0 * (1.0 - zeta)).epsilon(1e-12));
    CHECK(out.reward > 9.0);
  }
  SUBCASE("failure implies terminal over random steps") {
    std::uniform_real_distribution<double> ux(0.5, 24.5), uy(0.5, 17.5), uh(-3.14, 3.14),
        ua(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const auto out = env.step({ux(rng), uy(rng), uh(rng)}, {ua(rng)}, rng);
      if (out.failure) CHECK(out.terminal);
    }
  }
}

TEST_CASE("noise-free environments are deterministic") {
  CarParkingEnv car(quiet_car());
  PoleBalancingEnv pole(quiet_pole());
  Rng rng_a(1), rng_b(2);
  const auto car_a = car.step({10.0, 10.0, 0.5}, {0.3}, rng_a);
  const auto car_b = car.step({10.0, 10.0, 0.5}, {0.3}, rng_b);
  CHECK(car_a.next_state == car_b.next_state);
  CHECK(car_a.reward == car_b.reward);
  const auto pole_a = pole.step({0.01, 0.0, 0.1, 0.0}, {1.0}, rng_a);
  const auto pole_b = pole.step({0.01, 0.0, 0.1, 0.0}, {1.0}, rng_b);
  CHECK(pole_a.next_state == pole_b.next_state);
  CHECK(pole_a.reward == pole_b.reward);
}

TEST_CASE("with noise enabled the environment rng is consumed, not the exploration one") {
  CarParkingEnv car;  // default noise stds 0.1
  Rng env_rng(1);
  const Rng env_before = env_rng;
  car.step({10.0, 10.0, 0.5}, {0.3}, env_rng);
  CHECK_FALSE(env_rng == env_before);
}

TEST_CASE("pole reset") {
  SUBCASE("no jitter means the zero state") {
    PoleBalancingEnv env(quiet_pole());
    Rng rng(1);
    CHECK(env.reset(rng) == Vec{0.0, 0.0, 0.0, 0.0});
  }
  SUBCASE("same seed, same jittered state") {
    PoleBalancingEnv env;
    Rng a(42), b(42);
    CHECK(env.reset(a) == env.reset(b));
    Rng c(43);
    CHECK(env.reset(a) != env.reset(c));
  }
  SUBCASE("jitter stays within its bound") {
    PoleBalancingEnv env;
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
      for (double v : env.reset(rng)) CHECK(std::fabs(v) <= 0.05);
    }
  }
}

TEST_CASE("pole reward normalizers") {
  PoleBalancingEnv env(quiet_pole());
  CHECK(env.reward_for(0.0, 0.0) == 1.0);
  CHECK(env.reward_for(12.0 * M_PI / 180.0, 2.4) == doctest::Approx(0.0));
  CHECK(env.reward_for(6.0 * M_PI / 180.0, 0.0) == doctest::Approx(0.75));
  // normalizers saturate at 1
  CHECK(env.reward_for(1.0, 50.0) == doctest::Approx(0.0));

  Rng rng(1);
  std::uniform_real_distribution<double> ua(-0.2, 0.2), uv(-1.0, 1.0), ux(-2.0, 2.0),
      uf(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const auto out = env.step({ua(rng), uv(rng), ux(rng), uv(rng)}, {uf(rng)}, rng);
    CHECK(out.reward >= 0.0);
    CHECK(out.reward <= 1.0);
    if (out.failure) CHECK(out.terminal);
  }
}

TEST_CASE("pole failure thresholds") {
  PoleBalancingEnv env(quiet_pole());
  Rng rng(1);
  // Start just under the angle limit falling outward: next state crosses it.
  const double limit = env.params().angle_limit;
  const auto out = env.step({limit - 1e-4, 0.5, 0.0, 0.0}, {0.0}, rng);
  CHECK(out.failure);
  CHECK(out.terminal);

  const auto ok = env.step({0.0, 0.0, 0.0, 0.0}, {0.0}, rng);
  CHECK_FALSE(ok.terminal);
  CHECK(ok.reward == doctest::Approx(1.0));

  const auto off_track = env.step({0.0, 0.0, 2.4 - 1e-6, 5.0}, {0.0}, rng);
  CHECK(off_track.failure);
}

TEST_CASE("pole teacher is symmetric and safe") {
  PoleBalancingEnv env;  // stochastic defaults
  PoleTeacher teacher(env.params());
  CHECK(teacher.action({0.0, 0.0, 0.0, 0.0}) == Vec{0.0});

  // Mirrored states give mirrored forces.
  const Vec s = {0.03, -0.2, 0.5, 0.1};
  Vec mirrored = s;
  for (double& v : mirrored) v = -v;
  CHECK(teacher.action(s)[0] == doctest::Approx(-teacher.action(mirrored)[0]));

  // 100 noisy episodes without a failure.
  Rng rng(123);
  int failures = 0;
  for (int episode = 0; episode < 100; ++episode) {
    Vec state = env.reset(rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      const auto out = env.step(state, teacher.action(state), rng);
      if (out.failure) {
        ++failures;
        break;
      }
      state = out.next_state;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("car teacher parks every noisy episode without failures") {
  CarParkingEnv env;  // stochastic defaults
  CarTeacher teacher(env.params());
  Rng rng(321);
  int failures = 0, parked = 0;
  for (int episode = 0; episode < 100; ++episode) {
    Vec state = env.reset(rng);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      const auto out = env.step(state, teacher.action(state), rng);
      if (out.failure) {
        ++failures;
        break;
      }
      state = out.next_state;
      if (out.terminal) {
        ++parked;
        break;
      }
    }
  }
  CHECK(failures == 0);
  CHECK(parked == 100);
}

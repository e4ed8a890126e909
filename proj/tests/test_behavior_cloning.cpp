#include <doctest.h>

#include "pisrl/behavior_cloning.hpp"
#include "support/scripted_env.hpp"

using namespace pisrl;
using namespace pisrl::testing;

namespace {

// Straight-line scripts through 1-D states, one unit apart.
Script line_script(double start, std::size_t steps, double reward = -0.1) {
  Script s;
  for (std::size_t i = 0; i <= steps; ++i) s.states.push_back({start + double(i)});
  s.rewards.assign(steps, reward);
  return s;
}

}  // namespace

TEST_CASE("first step with an empty base consults the teacher and stores a case") {
  ScriptedEnv env({line_script(0.0, 3)}, 1);
  LinearTeacher teacher(0.5, 1.0);
  CloneLimits limits{1, 10, 0.01};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.25, 100, limits, rng);

  REQUIRE(report.episodes.size() == 1);
  CHECK(report.episodes[0].steps_teacher == 3);  // every decision state is novel
  CHECK(report.episodes[0].steps_case == 0);
  CHECK(base.size() == 3);
  CHECK(base.at(0).state == Vec{0.0});
  CHECK(base.at(0).action == teacher.action({0.0}));
}

TEST_CASE("states within the threshold replay the stored action without inserting") {
  // Second episode revisits the same states: all known, nothing added.
  ScriptedEnv env({line_script(0.0, 3), line_script(0.0, 3)}, 1);
  LinearTeacher teacher(0.5, 1.0);
  CloneLimits limits{2, 10, 0.0};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.25, 100, limits, rng);

  REQUIRE(report.episodes.size() == 2);
  CHECK(report.episodes[1].steps_teacher == 0);
  CHECK(report.episodes[1].steps_case == 3);
  CHECK(report.episodes[1].inserted == 0);
  CHECK(base.size() == 3);
  // replaying bumped each case's use count
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(base.at(i).use_count == 1);
}

TEST_CASE("teacher plus case steps cover every step") {
  ScriptedEnv env({line_script(0.0, 5), line_script(0.3, 5), line_script(0.6, 5)}, 1);
  LinearTeacher teacher(1.0, 0.0);
  CloneLimits limits{3, 10, 0.0};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.4, 100, limits, rng);
  for (const auto& ep : report.episodes) {
    CHECK(ep.steps_teacher + ep.steps_case == ep.steps_total);
  }
}

TEST_CASE("cloned cases all carry value zero") {
  ScriptedEnv env({line_script(0.0, 4), line_script(0.1, 4)}, 1);
  LinearTeacher teacher(2.0, -1.0);
  CloneLimits limits{2, 10, 0.0};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.05, 100, limits, rng);
  REQUIRE(base.size() > 0);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(base.at(i).value == 0.0);
}

TEST_CASE("cloning keeps the base at capacity after each episode") {
  ScriptedEnv env({line_script(0.0, 9), line_script(20.0, 9), line_script(40.0, 9)}, 1);
  LinearTeacher teacher(1.0, 0.0);
  CloneLimits limits{3, 10, 0.0};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.25, 12, limits, rng);
  for (const auto& ep : report.episodes) CHECK(ep.base_size <= 12);
  CHECK(base.size() <= 12);
}

TEST_CASE("a failure episode stops cloning and is recorded") {
  Script bad = line_script(0.0, 3);
  bad.end_in_failure = true;
  ScriptedEnv env({bad, line_script(10.0, 3)}, 1);
  LinearTeacher teacher(1.0, 0.0);
  CloneLimits limits{5, 10, 0.0};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.25, 100, limits, rng);
  CHECK(report.aborted_on_failure);
  REQUIRE(report.episodes.size() == 1);
  CHECK(report.episodes[0].failure);
}

TEST_CASE("cloning stops once the teacher fraction falls below the limit") {
  // Identical episodes: after the first, everything is known, so the
  // windowed fraction drops under 1% as soon as the window fills.
  std::vector<Script> scripts(40, line_script(0.0, 50));
  ScriptedEnv env(scripts, 1);
  LinearTeacher teacher(1.0, 0.0);
  CloneLimits limits{40, 10, 0.01};
  Rng rng(1);
  auto [base, report] = clone_behavior(env, teacher, 0.25, 1000, limits, rng);
  CHECK(report.episodes_run < 40);
  CHECK(report.teacher_fraction(report.episodes_run - 1, 10) < 0.01);
}

TEST_CASE("ib1 stores every step of every episode") {
  SUBCASE("one deterministic episode of length L") {
    ScriptedEnv env({line_script(0.0, 7)}, 1);
    LinearTeacher teacher(1.0, 0.0);
    Rng rng(1);
    const CaseBase base = ib1_clone(env, teacher, 1, 0.25, rng);
    CHECK(base.size() == 7);
  }
  SUBCASE("duplicate states are stored again, unlike cloning") {
    ScriptedEnv env({line_script(0.0, 4), line_script(0.0, 4)}, 1);
    LinearTeacher teacher(1.0, 0.0);
    Rng rng(1);
    const CaseBase base = ib1_clone(env, teacher, 2, 0.25, rng);
    CHECK(base.size() == 8);
  }
}

TEST_CASE("evaluate_policy is read-only and splits steps between case and teacher") {
  ScriptedEnv env({line_script(0.0, 3)}, 1);
  LinearTeacher teacher(1.0, 5.0);
  CaseBase base(1, 1, 0.25, 100);
  base.insert({0.0}, {42.0}, 0.0);
  base.insert({1.0}, {43.0}, 0.0);
  const auto version = base.mutation_version();

  Rng rng(1);
  const auto rows = evaluate_policy(base, env, &teacher, 1, rng);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].steps == 3);
  CHECK(rows[0].steps_teacher == 1);  // state 2 is unknown
  CHECK(base.mutation_version() == version);
  CHECK(base.at(0).use_count == 0);
  CHECK(base.at(1).use_count == 0);
  CHECK(rows[0].cumulative_reward == doctest::Approx(-0.3));
}

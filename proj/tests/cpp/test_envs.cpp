#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "vpd/envs.hpp"
#include "vpd/rng.hpp"

using vpd::Env;
using vpd::Rng;
using vpd::StepResult;
using vpd::Vec;

TEST_CASE("make_env rejects unknown names, naming the offender") {
  try {
    vpd::make_env("half-cheetah");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("half-cheetah") != std::string::npos);
  }
}

TEST_CASE("goal-world spec") {
  auto env = vpd::make_env("simplegoal-v0");
  const vpd::EnvSpec& spec = env->spec();
  CHECK(spec.state_dim == 2);
  CHECK(spec.action_dim == 2);
  CHECK(spec.t_max == 50);
  CHECK(spec.state_bounds[0].lo == 0.0);
  CHECK(spec.state_bounds[0].hi == 1.0);
  CHECK(spec.action_bounds[1].lo == -1.0);
  CHECK(spec.state_names == std::vector<std::string>{"x", "y"});
  CHECK(spec.action_names == std::vector<std::string>{"dx", "dy"});
}

TEST_CASE("goal-world region predicates use strict inequalities") {
  using vpd::simplegoal::in_goal;
  using vpd::simplegoal::in_pitfall;
  CHECK(in_goal(Vec{0.0999, 0.0999}));
  CHECK_FALSE(in_goal(Vec{0.1, 0.05}));
  CHECK_FALSE(in_goal(Vec{0.05, 0.1}));
  CHECK(in_pitfall(Vec{0.45, 0.45}));
  CHECK_FALSE(in_pitfall(Vec{0.4, 0.5}));
  CHECK_FALSE(in_pitfall(Vec{0.5, 0.6}));
}

TEST_CASE("goal-world starts avoid both terminal regions") {
  auto env = vpd::make_env("simplegoal-v0");
  Rng rng(3);
  int quadrant_hits[4] = {0, 0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    Vec s = env->reset(rng);
    REQUIRE(s[0] >= 0.0);
    REQUIRE(s[0] <= 1.0);
    REQUIRE(s[1] >= 0.0);
    REQUIRE(s[1] <= 1.0);
    REQUIRE_FALSE(vpd::simplegoal::in_goal(s));
    REQUIRE_FALSE(vpd::simplegoal::in_pitfall(s));
    ++quadrant_hits[(s[0] > 0.5 ? 1 : 0) + (s[1] > 0.5 ? 2 : 0)];
  }
  for (int h : quadrant_hits) CHECK(h > 150);  // starts cover the square
}

TEST_CASE("goal-world shaping reward for a diagonal move") {
  StepResult r = vpd::simplegoal::transition(Vec{0.9, 0.9}, Vec{-1.0, -1.0});
  CHECK(r.next_state[0] == doctest::Approx(0.8));
  CHECK(r.next_state[1] == doctest::Approx(0.8));
  // 10 * (|(0.85,0.85)| - |(0.75,0.75)|) = sqrt(2)
  CHECK(r.reward == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK_FALSE(r.terminated);
}

TEST_CASE("goal-world terminal bonuses add to the shaping term") {
  // into the goal corner
  StepResult g = vpd::simplegoal::transition(Vec{0.15, 0.05}, Vec{-1.0, 0.0});
  CHECK(g.terminated);
  const double old_d = std::hypot(0.10, 0.00);
  const double new_d = std::hypot(0.00, 0.00);
  CHECK(g.reward == doctest::Approx(10.0 * (old_d - new_d) + 10.0));

  // into the pitfall
  StepResult p = vpd::simplegoal::transition(Vec{0.45, 0.35}, Vec{0.0, 1.0});
  CHECK(p.terminated);
  CHECK(p.reward < 0.0);
  CHECK(p.reward == doctest::Approx(10.0 * (std::hypot(0.40, 0.30) -
                                            std::hypot(0.40, 0.40)) -
                                    10.0));
}

TEST_CASE("goal-world moves are scaled, clamped actions") {
  // oversized action components clamp to the unit cube before scaling
  StepResult r = vpd::simplegoal::transition(Vec{0.5, 0.98}, Vec{3.0, 5.0});
  CHECK(r.next_state[0] == doctest::Approx(0.6));
  CHECK(r.next_state[1] == doctest::Approx(1.0));  // hits the wall
}

TEST_CASE("goal-world shaping telescopes along a trajectory") {
  auto env = vpd::make_env("simplegoal-v0");
  Rng rng(17);
  Vec s0 = env->reset(rng);
  Vec s = s0;
  double total = 0.0;
  double bonus = 0.0;
  for (int t = 0; t < 50; ++t) {
    Vec a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    StepResult r = env->step(a);
    total += r.reward;
    if (r.terminated)
      bonus = vpd::simplegoal::in_goal(r.next_state) ? 10.0 : -10.0;
    s = r.next_state;
    if (r.terminated || r.truncated) break;
  }
  const double expect =
      10.0 * (std::hypot(s0[0] - 0.05, s0[1] - 0.05) -
              std::hypot(s[0] - 0.05, s[1] - 0.05)) +
      bonus;
  CHECK(total == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("goal-world truncates at 50 steps") {
  auto env = vpd::make_env("simplegoal-v0");
  Rng rng(5);
  env->reset(rng);
  StepResult last;
  int steps = 0;
  do {
    last = env->step(Vec{0.0, 0.0});  // standing still never terminates
    ++steps;
  } while (!last.terminated && !last.truncated);
  CHECK(steps == 50);
  CHECK(last.truncated);
  CHECK_FALSE(last.terminated);
}

TEST_CASE("car-on-hill spec") {
  auto env = vpd::make_env("mountaincarcontinuous-v0");
  const vpd::EnvSpec& spec = env->spec();
  CHECK(spec.state_dim == 2);
  CHECK(spec.action_dim == 1);
  CHECK(spec.t_max == 1000);
  CHECK(spec.state_bounds[0].lo == -1.2);
  CHECK(spec.state_bounds[0].hi == 0.6);
  CHECK(spec.state_bounds[1].lo == -0.07);
  CHECK(spec.state_bounds[1].hi == 0.07);
  CHECK(spec.state_names == std::vector<std::string>{"x", "v"});
  CHECK(spec.action_names == std::vector<std::string>{"F"});
}

TEST_CASE("car-on-hill reset law: position uniform in [-0.6,-0.4], zero speed") {
  auto env = vpd::make_env("mountaincarcontinuous-v0");
  Rng rng(23);
  double lo = 1.0, hi = -1.0;
  for (int i = 0; i < 1000; ++i) {
    Vec s = env->reset(rng);
    REQUIRE(s[0] >= -0.6);
    REQUIRE(s[0] <= -0.4);
    REQUIRE(s[1] == 0.0);
    lo = std::min(lo, s[0]);
    hi = std::max(hi, s[0]);
  }
  CHECK(lo < -0.58);  // draws spread over the whole interval
  CHECK(hi > -0.42);
}

TEST_CASE("car-on-hill coasting step from the valley") {
  StepResult r = vpd::mountaincar::transition(Vec{-0.5, 0.0}, Vec{0.0});
  CHECK(r.next_state[1] == doctest::Approx(-0.0025 * std::cos(-1.5)).epsilon(1e-12));
  CHECK(r.next_state[0] == doctest::Approx(-0.5 + r.next_state[1]));
  CHECK(r.reward == 0.0);
  CHECK_FALSE(r.terminated);
}

TEST_CASE("car-on-hill wall zeroes leftward speed") {
  StepResult r = vpd::mountaincar::transition(Vec{-1.19, -0.05}, Vec{-1.0});
  CHECK(r.next_state[0] == -1.2);
  CHECK(r.next_state[1] == 0.0);
}

TEST_CASE("car-on-hill terminates past the flag with the bonus") {
  StepResult r = vpd::mountaincar::transition(Vec{0.449, 0.07}, Vec{1.0});
  CHECK(r.terminated);
  CHECK(r.next_state[0] >= 0.45);
  CHECK(r.reward == doctest::Approx(100.0 - 0.1));
}

TEST_CASE("car-on-hill force penalty uses the clamped action") {
  StepResult a = vpd::mountaincar::transition(Vec{-0.5, 0.0}, Vec{1.0});
  StepResult b = vpd::mountaincar::transition(Vec{-0.5, 0.0}, Vec{4.0});
  CHECK(a.reward == b.reward);
  CHECK(a.next_state == b.next_state);
}

TEST_CASE("car-on-hill matches the reference step function") {
  Rng rng(88);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-1.2, 0.449);
    const double v = rng.uniform(-0.07, 0.07);
    const double f = rng.uniform(-1.0, 1.0);
    StepResult got = vpd::mountaincar::transition(Vec{x, v}, Vec{f});
    auto want = oracles::reference_mountaincar_step(x, v, f);
    CAPTURE(x);
    CAPTURE(v);
    CAPTURE(f);
    REQUIRE(std::abs(got.next_state[0] - want.position) <= 1e-10);
    REQUIRE(std::abs(got.next_state[1] - want.velocity) <= 1e-10);
    REQUIRE(std::abs(got.reward - want.reward) <= 1e-10);
    REQUIRE(got.terminated == want.terminated);
  }
}

TEST_CASE("zero force never climbs the hill") {
  auto env = vpd::make_env("mountaincarcontinuous-v0");
  Rng rng(9);
  for (int episode = 0; episode < 20; ++episode) {
    env->reset(rng);
    StepResult r;
    do {
      r = env->step(Vec{0.0});
    } while (!r.terminated && !r.truncated);
    REQUIRE(r.truncated);
    REQUIRE_FALSE(r.terminated);
  }
}

TEST_CASE("states stay inside the documented bounds under random actions") {
  for (const char* name : {"simplegoal-v0", "mountaincarcontinuous-v0"}) {
    auto env = vpd::make_env(name);
    const vpd::EnvSpec& spec = env->spec();
    Rng rng(1234);
    long steps_left = 200000;
    while (steps_left > 0) {
      env->reset(rng);
      while (steps_left > 0) {
        Vec a(static_cast<std::size_t>(spec.action_dim));
        for (double& ai : a) ai = rng.uniform(-1.5, 1.5);
        StepResult r = env->step(a);
        --steps_left;
        for (int j = 0; j < spec.state_dim; ++j) {
          REQUIRE(r.next_state[static_cast<std::size_t>(j)] >=
                  spec.state_bounds[static_cast<std::size_t>(j)].lo);
          REQUIRE(r.next_state[static_cast<std::size_t>(j)] <=
                  spec.state_bounds[static_cast<std::size_t>(j)].hi);
        }
        if (r.terminated || r.truncated) break;
      }
    }
  }
}

TEST_CASE("step validates the action dimension") {
  auto env = vpd::make_env("mountaincarcontinuous-v0");
  Rng rng(1);
  env->reset(rng);
  CHECK_THROWS_AS(env->step(Vec{0.0, 0.0}), std::invalid_argument);
}

#include "vpd/envs.hpp"

#include <cmath>

namespace vpd {

namespace simplegoal {

bool in_goal(const Vec& p) { return p[0] < 0.1 && p[1] < 0.1; }

bool in_pitfall(const Vec& p) {
  return p[0] > 0.4 && p[0] < 0.6 && p[1] > 0.4 && p[1] < 0.6;
}

Vec sample_start(Rng& rng) {
  // Rejection sampling keeps starts outside both terminal regions.
  while (true) {
    Vec p{rng.uniform01(), rng.uniform01()};
    if (!in_goal(p) && !in_pitfall(p)) return p;
  }
}

StepResult transition(const Vec& state, const Vec& action) {
  const double ax = clamp(action[0], -1.0, 1.0);
  const double ay = clamp(action[1], -1.0, 1.0);
  Vec next{clamp(state[0] + 0.1 * ax, 0.0, 1.0),
           clamp(state[1] + 0.1 * ay, 0.0, 1.0)};
  const double old_d = std::hypot(state[0] - kGoalCenterX, state[1] - kGoalCenterY);
  const double new_d = std::hypot(next[0] - kGoalCenterX, next[1] - kGoalCenterY);
  StepResult r;
  r.reward = 10.0 * (old_d - new_d);
  if (in_goal(next)) {
    r.reward += 10.0;
    r.terminated = true;
  } else if (in_pitfall(next)) {
    r.reward -= 10.0;
    r.terminated = true;
  }
  r.next_state = std::move(next);
  return r;
}

}  // namespace simplegoal

namespace mountaincar {

Vec sample_start(Rng& rng) { return {rng.uniform(-0.6, -0.4), 0.0}; }

StepResult transition(const Vec& state, const Vec& action) {
  const double force = clamp(action[0], -1.0, 1.0);
  double v = state[1] + force * 0.0015 - 0.0025 * std::cos(3.0 * state[0]);
  v = clamp(v, -0.07, 0.07);
  double x = clamp(state[0] + v, -1.2, 0.6);
  if (x == -1.2 && v < 0.0) v = 0.0;
  StepResult r;
  r.terminated = x >= 0.45;
  r.reward = -0.1 * force * force + (r.terminated ? 100.0 : 0.0);
  r.next_state = {x, v};
  return r;
}

}  // namespace mountaincar

namespace {

template <StepResult (*Transition)(const Vec&, const Vec&),
          Vec (*Start)(Rng&)>
class BasicEnv final : public Env {
 public:
  explicit BasicEnv(EnvSpec spec) : spec_(std::move(spec)) {}

  const EnvSpec& spec() const override { return spec_; }

  Vec reset(Rng& rng) override {
    state_ = Start(rng);
    t_ = 0;
    return state_;
  }

  StepResult step(const Vec& action) override {
    if (static_cast<int>(action.size()) != spec_.action_dim)
      throw std::invalid_argument("step: action dimension mismatch");
    StepResult r = Transition(state_, action);
    t_ += 1;
    if (!r.terminated && t_ >= spec_.t_max) r.truncated = true;
    state_ = r.next_state;
    return r;
  }

  const Vec& state() const override { return state_; }

 private:
  EnvSpec spec_;
  Vec state_;
  int t_ = 0;
};

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "simplegoal-v0") {
    EnvSpec spec;
    spec.name = name;
    spec.state_dim = 2;
    spec.action_dim = 2;
    spec.state_bounds = {{0.0, 1.0}, {0.0, 1.0}};
    spec.action_bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    spec.t_max = 50;
    spec.state_names = {"x", "y"};
    spec.action_names = {"dx", "dy"};
    return std::make_unique<
        BasicEnv<simplegoal::transition, simplegoal::sample_start>>(std::move(spec));
  }
  if (name == "mountaincarcontinuous-v0") {
    EnvSpec spec;
    spec.name = name;
    spec.state_dim = 2;
    spec.action_dim = 1;
    spec.state_bounds = {{-1.2, 0.6}, {-0.07, 0.07}};
    spec.action_bounds = {{-1.0, 1.0}};
    spec.t_max = 1000;
    spec.state_names = {"x", "v"};
    spec.action_names = {"F"};
    return std::make_unique<
        BasicEnv<mountaincar::transition, mountaincar::sample_start>>(std::move(spec));
  }
  throw std::invalid_argument("unknown environment '" + name + "'");
}

}  // namespace vpd

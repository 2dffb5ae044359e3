#pragma once

#include <memory>
#include <string>

#include "vpd/common.hpp"
#include "vpd/rng.hpp"

namespace vpd {

struct EnvSpec {
  std::string name;
  int state_dim = 0;
  int action_dim = 0;
  Bounds state_bounds;
  Bounds action_bounds;
  int t_max = 0;
  std::vector<std::string> state_names;   // for table/CSV headers
  std::vector<std::string> action_names;
};

struct StepResult {
  Vec next_state;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

/// Deterministic episodic environment. reset() seeds a new episode;
/// step() advances it and flags truncation at t_max.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vec reset(Rng& rng) = 0;
  virtual StepResult step(const Vec& action) = 0;
  virtual const Vec& state() const = 0;
};

/// Continuous 2-D navigation box [0,1]^2 with a corner goal region
/// (x < 0.1, y < 0.1) and a central pitfall (0.4 < x,y < 0.6). Moves are
/// 0.1 * action; reward is 10x the progress toward the goal center, +10 on
/// reaching the goal, -10 on entering the pitfall. Truncates at 50 steps.
namespace simplegoal {
inline constexpr double kGoalCenterX = 0.05;
inline constexpr double kGoalCenterY = 0.05;
bool in_goal(const Vec& p);
bool in_pitfall(const Vec& p);
Vec sample_start(Rng& rng);
/// Single transition without truncation bookkeeping.
StepResult transition(const Vec& state, const Vec& action);
}  // namespace simplegoal

/// Classic continuous mountain-car: state (x, v), scalar force in [-1, 1],
/// reward -0.1 F^2 per step and +100 on reaching x >= 0.45. Truncates at
/// 1000 steps. Dynamics constants follow the public reference environment.
namespace mountaincar {
Vec sample_start(Rng& rng);
StepResult transition(const Vec& state, const Vec& action);
}  // namespace mountaincar

/// Constructs "simplegoal-v0" or "mountaincarcontinuous-v0".
std::unique_ptr<Env> make_env(const std::string& name);

}  // namespace vpd

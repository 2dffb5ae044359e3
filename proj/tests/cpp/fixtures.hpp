#pragma once

// A known-good 13-cell policy for the goal-reaching environment, used as a
// replay fixture: loading it and evaluating must clear a healthy return, and
// its first row pins down the exact formula rendering.

#include <utility>

#include "vpd/bundle.hpp"
#include "vpd/distiller.hpp"

namespace fixtures {

struct CellRow {
  vpd::Vec codeword;
  double w[4];  // row-major 2x2
  double b[2];
};

inline const CellRow kGoalPolicyRows[13] = {
    {{0.891, 0.628}, {-0.148, -0.021, -0.420, 0.231}, {-0.055, -1.095}},
    {{0.826, 0.460}, {-0.347, 0.305, -1.087, -1.370}, {-0.212, -0.319}},
    {{0.407, 0.150}, {0.0, 3.175, 0.0, -4.127}, {-1.000, -0.710}},
    {{0.181, 0.326}, {-4.588, 0.045, 3.134, -0.082}, {-0.620, -0.978}},
    {{0.425, 0.568}, {-1.267, 0.966, -0.281, -0.967}, {-0.056, -0.702}},
    {{0.292, 0.765}, {-1.657, -0.271, 0.433, -0.602}, {0.147, -0.484}},
    {{0.154, 0.051}, {-5.328, 5.256, -2.583, -4.501}, {0.191, -0.461}},
    {{0.545, 0.817}, {-0.124, -0.035, 0.082, -1.027}, {-0.964, 0.226}},
    {{0.842, 0.153}, {-0.628, 0.406, -0.536, -0.010}, {-0.385, 0.663}},
    {{0.034, 0.496}, {-0.649, -0.652, 0.706, -0.6946}, {-0.076, -0.463}},
    {{0.583, 0.303}, {-0.290, -0.470, 0.103, -3.580}, {-0.855, 0.991}},
    {{0.824, 0.969}, {0.266, -0.424, -0.598, -0.256}, {-0.684, -0.420}},
    {{0.195, 0.970}, {0.327, -0.246, 0.620, -0.077}, {0.349, -0.882}},
};

inline vpd::PolicyBundle goal_policy_bundle() {
  vpd::DistilledPolicy dp(2);
  dp.action_bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
  for (const CellRow& row : kGoalPolicyRows) {
    dp.partition.insert(row.codeword);
    vpd::LinearPolicy p;
    p.state_dim = 2;
    p.action_dim = 2;
    p.weights = {row.w[0], row.w[1], row.w[2], row.w[3]};
    p.bias = {row.b[0], row.b[1]};
    dp.subpolicies.push_back(std::move(p));
  }
  return {"simplegoal-v0", std::move(dp)};
}

}  // namespace fixtures

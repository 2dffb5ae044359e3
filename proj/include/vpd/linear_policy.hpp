#pragma once

#include <span>
#include <vector>

#include "vpd/common.hpp"
#include "vpd/rng.hpp"

namespace vpd {

/// Affine state->action map for one Voronoi cell: action = W * state + bias.
/// Weights are row-major, one row per action dimension.
struct LinearPolicy {
  int state_dim = 0;
  int action_dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double weight(int row, int col) const {
    return weights[static_cast<std::size_t>(row * state_dim + col)];
  }

  Vec predict(std::span<const double> state) const;
};

/// Factory: weights i.i.d. uniform on [-0.1, 0.1], bias zero.
LinearPolicy init_random(int state_dim, int action_dim, Rng& rng);

/// L-infinity distance over all corresponding weight and bias entries.
double param_distance(const LinearPolicy& p, const LinearPolicy& q);

/// (state, teacher action) pairs collected for one subpolicy.
struct ExperienceBuffer {
  std::vector<Vec> states;
  std::vector<Vec> actions;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  void clear() {
    states.clear();
    actions.clear();
  }
  void add(Vec state, Vec action) {
    states.push_back(std::move(state));
    actions.push_back(std::move(action));
  }
};

/// Adam moment accumulators, shaped like the owning policy's parameters.
struct AdamState {
  std::vector<double> m_w, v_w, m_b, v_b;
  long step = 0;

  void reset(const LinearPolicy& shape) {
    m_w.assign(shape.weights.size(), 0.0);
    v_w.assign(shape.weights.size(), 0.0);
    m_b.assign(shape.bias.size(), 0.0);
    v_b.assign(shape.bias.size(), 0.0);
    step = 0;
  }
};

struct TrainSettings {
  double lr = 1e-3;
  int batch_size = 64;
  int max_steps = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainResult {
  bool trained = false;  // false: empty buffer, nothing to do
  int steps = 0;
  double mean_loss = 0.0;  // mean per-batch MSE, measured pre-update
};

/// Runs min(ceil(|buffer|/batch_size), max_steps) Adam steps on mini-batches
/// drawn from the buffer, minimizing MSE against the stored teacher actions.
/// A batch_size >= |buffer| processes the whole buffer per step (full batch).
TrainResult train_epoch(LinearPolicy& policy, AdamState& opt,
                        const ExperienceBuffer& buffer,
                        const TrainSettings& settings, Rng& rng);

/// Renders one action row as a human-readable formula, e.g.
/// "-0.148x-0.021y-0.055". Coefficients are rounded to four decimals with
/// trailing zeros trimmed down to three; exactly-zero weights are omitted and
/// the bias is always printed with an explicit sign.
std::string format_formula(const LinearPolicy& policy, int action_row,
                           std::span<const std::string> var_names);

}  // namespace vpd

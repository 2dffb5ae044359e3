#include "vpd/linear_policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace vpd {

Vec LinearPolicy::predict(std::span<const double> state) const {
  if (static_cast<int>(state.size()) != state_dim)
    throw std::invalid_argument("predict: dimension mismatch");
  Vec out(static_cast<std::size_t>(action_dim));
  for (int o = 0; o < action_dim; ++o) {
    double acc = bias[static_cast<std::size_t>(o)];
    const double* row = weights.data() + static_cast<std::size_t>(o) * state_dim;
    for (int j = 0; j < state_dim; ++j) acc += row[j] * state[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(o)] = acc;
  }
  return out;
}

LinearPolicy init_random(int state_dim, int action_dim, Rng& rng) {
  if (state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("init_random: dims must be >= 1");
  LinearPolicy p;
  p.state_dim = state_dim;
  p.action_dim = action_dim;
  p.weights.resize(static_cast<std::size_t>(state_dim) * action_dim);
  for (auto& w : p.weights) w = rng.uniform(-0.1, 0.1);
  p.bias.assign(static_cast<std::size_t>(action_dim), 0.0);
  return p;
}

double param_distance(const LinearPolicy& p, const LinearPolicy& q) {
  if (p.state_dim != q.state_dim || p.action_dim != q.action_dim)
    throw std::invalid_argument("param_distance: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i)
    d = std::max(d, std::abs(p.weights[i] - q.weights[i]));
  for (std::size_t i = 0; i < p.bias.size(); ++i)
    d = std::max(d, std::abs(p.bias[i] - q.bias[i]));
  return d;
}

TrainResult train_epoch(LinearPolicy& policy, AdamState& opt,
                        const ExperienceBuffer& buffer,
                        const TrainSettings& settings, Rng& rng) {
  TrainResult result;
  const std::size_t n = buffer.size();
  if (n == 0) return result;
  if (buffer.actions.size() != n)
    throw std::invalid_argument("train_epoch: buffer state/action length mismatch");

  const std::size_t bs = static_cast<std::size_t>(settings.batch_size);
  const bool full_batch = bs >= n;
  const long want = static_cast<long>((n + bs - 1) / bs);
  const int steps = static_cast<int>(
      std::min<long>(want, static_cast<long>(settings.max_steps)));

  const std::size_t n_w = policy.weights.size();
  const std::size_t n_b = policy.bias.size();
  if (opt.m_w.size() != n_w) opt.reset(policy);

  std::vector<double> grad_w(n_w), grad_b(n_b);
  std::vector<std::size_t> batch;
  double loss_sum = 0.0;

  for (int s = 0; s < steps; ++s) {
    batch.clear();
    if (full_batch) {
      batch.resize(n);
      std::iota(batch.begin(), batch.end(), std::size_t{0});
    } else {
      for (std::size_t i = 0; i < bs; ++i) batch.push_back(rng.index(n));
    }

    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    double loss = 0.0;
    for (const std::size_t idx : batch) {
      const Vec& st = buffer.states[idx];
      const Vec& target = buffer.actions[idx];
      const Vec pred = policy.predict(st);
      for (int o = 0; o < policy.action_dim; ++o) {
        const double e = pred[static_cast<std::size_t>(o)] - target[static_cast<std::size_t>(o)];
        loss += e * e;
        grad_b[static_cast<std::size_t>(o)] += e;
        for (int j = 0; j < policy.state_dim; ++j)
          grad_w[static_cast<std::size_t>(o * policy.state_dim + j)] +=
              e * st[static_cast<std::size_t>(j)];
      }
    }
    const double norm = static_cast<double>(batch.size()) * policy.action_dim;
    loss /= norm;
    loss_sum += loss;
    const double gscale = 2.0 / norm;

    // Adam with bias correction.
    opt.step += 1;
    const double bc1 = 1.0 - std::pow(settings.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(settings.beta2, static_cast<double>(opt.step));
    auto update = [&](std::vector<double>& param, std::vector<double>& m,
                      std::vector<double>& v, const std::vector<double>& g) {
      for (std::size_t i = 0; i < param.size(); ++i) {
        const double gi = g[i] * gscale;
        m[i] = settings.beta1 * m[i] + (1.0 - settings.beta1) * gi;
        v[i] = settings.beta2 * v[i] + (1.0 - settings.beta2) * gi * gi;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        param[i] -= settings.lr * mhat / (std::sqrt(vhat) + settings.epsilon);
      }
    };
    update(policy.weights, opt.m_w, opt.v_w, grad_w);
    update(policy.bias, opt.m_b, opt.v_b, grad_b);
  }

  result.trained = true;
  result.steps = steps;
  result.mean_loss = loss_sum / steps;
  return result;
}

namespace {

// "0.1480" -> "0.148", "0.4200" -> "0.420", "1.0000" -> "1.000".
std::string format_coeff(double v) {
  double r = std::round(v * 10000.0) / 10000.0;
  if (r == 0.0) r = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", r);
  std::string s(buf);
  if (s.back() == '0') s.pop_back();
  return s;
}

}  // namespace

std::string format_formula(const LinearPolicy& policy, int action_row,
                           std::span<const std::string> var_names) {
  if (action_row < 0 || action_row >= policy.action_dim)
    throw std::invalid_argument("format_formula: action row out of range");
  if (static_cast<int>(var_names.size()) != policy.state_dim)
    throw std::invalid_argument("format_formula: variable name count mismatch");
  std::string out;
  for (int j = 0; j < policy.state_dim; ++j) {
    const double w = policy.weight(action_row, j);
    if (w == 0.0) continue;
    std::string c = format_coeff(w);
    if (!out.empty() && c[0] != '-') out += '+';
    out += c;
    out += var_names[static_cast<std::size_t>(j)];
  }
  std::string b = format_coeff(policy.bias[static_cast<std::size_t>(action_row)]);
  if (b[0] != '-') out += '+';
  out += b;
  return out;
}

}  // namespace vpd

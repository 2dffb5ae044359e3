#include "vpd/eval_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "vpd/rng.hpp"

namespace vpd {

namespace {

// Linear-interpolation quantile on sorted data, h = (n - 1) * p.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SpreadStats spread_stats(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("spread_stats: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();

  SpreadStats s;
  s.n = n;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(n));
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  s.iqr = s.q3 - s.q1;

  const double lo_fence = s.q1 - 1.5 * s.iqr;
  const double hi_fence = s.q3 + 1.5 * s.iqr;
  for (double v : values)
    if (v < lo_fence || v > hi_fence) s.outlier_values.push_back(v);
  s.n_outliers = s.outlier_values.size();
  s.coverage = static_cast<double>(n - s.n_outliers) / static_cast<double>(n);
  return s;
}

EvalOutcome evaluate(const ActFn& act, Env& env, int n_episodes,
                     std::uint64_t seed) {
  if (n_episodes < 1)
    throw std::invalid_argument("evaluate: n_episodes must be positive");

  EvalOutcome out;
  out.returns.reserve(static_cast<std::size_t>(n_episodes));
  for (int i = 0; i < n_episodes; ++i) {
    Rng rng(derive_seed(seed, kStreamEval, static_cast<std::uint64_t>(i)));
    Vec state = env.reset(rng);
    double ret = 0.0;
    int steps = 0;
    bool terminated = false;
    while (true) {
      StepResult step = env.step(act(state));
      ret += step.reward;
      ++steps;
      if (step.terminated || step.truncated) {
        terminated = step.terminated;
        break;
      }
      state = std::move(step.next_state);
    }
    out.returns.push_back(ret);
    out.steps.push_back(steps);
    out.terminated.push_back(terminated);
  }
  out.stats = spread_stats(out.returns);
  return out;
}

std::string eval_report_json(const EvalOutcome& outcome,
                             const std::string& environment,
                             std::uint64_t seed) {
  const SpreadStats& s = outcome.stats;
  nlohmann::json j;
  j["environment"] = environment;
  j["seed"] = seed;
  j["episodes"] = outcome.returns.size();
  j["stats"] = {{"n", s.n},
                {"mean", s.mean},
                {"stddev", s.stddev},
                {"min", s.min},
                {"q1", s.q1},
                {"median", s.median},
                {"q3", s.q3},
                {"max", s.max},
                {"iqr", s.iqr},
                {"n_outliers", s.n_outliers},
                {"coverage", s.coverage},
                {"outlier_values", s.outlier_values}};
  std::size_t n_terminated = 0;
  for (bool t : outcome.terminated) n_terminated += t ? 1u : 0u;
  j["terminated_episodes"] = n_terminated;
  j["returns"] = outcome.returns;
  j["steps"] = outcome.steps;
  return j.dump(2) + "\n";
}

namespace {

struct Grid2 {
  int resolution;
  double x0, x1, y0, y1;

  double x(int i) const {
    return x0 + (x1 - x0) * static_cast<double>(i) /
                    static_cast<double>(resolution - 1);
  }
  double y(int j) const {
    return y0 + (y1 - y0) * static_cast<double>(j) /
                    static_cast<double>(resolution - 1);
  }
};

Grid2 make_grid(const EnvSpec& spec, int resolution) {
  if (spec.state_dim != 2)
    throw std::invalid_argument("grid sampling requires a 2-D state space");
  if (resolution < 2)
    throw std::invalid_argument("resolution must be at least 2");
  return {resolution, spec.state_bounds[0].lo, spec.state_bounds[0].hi,
          spec.state_bounds[1].lo, spec.state_bounds[1].hi};
}

}  // namespace

VizTable quiver_data(const EnvSpec& spec, const ActFn& act, int resolution,
                     const VoronoiPartition* partition) {
  Grid2 g = make_grid(spec, resolution);
  VizTable table;
  table.columns = {spec.state_names[0], spec.state_names[1]};
  for (const std::string& name : spec.action_names)
    table.columns.push_back(name);
  if (partition) table.columns.push_back("cell");

  table.rows.reserve(static_cast<std::size_t>(resolution) *
                     static_cast<std::size_t>(resolution));
  Vec state(2);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      state[0] = g.x(i);
      state[1] = g.y(j);
      Vec action = act(state);
      Vec row{state[0], state[1]};
      row.insert(row.end(), action.begin(), action.end());
      if (partition)
        row.push_back(static_cast<double>(partition->nearest(state)));
      table.rows.push_back(std::move(row));
    }
  return table;
}

VizTable heatmap_data(const EnvSpec& spec, const ActFn& act, int resolution,
                      const VoronoiPartition* partition) {
  Grid2 g = make_grid(spec, resolution);
  VizTable table;
  table.columns = {spec.state_names[0], spec.state_names[1], "value"};
  if (partition) table.columns.push_back("cell");

  table.rows.reserve(static_cast<std::size_t>(resolution) *
                     static_cast<std::size_t>(resolution));
  Vec state(2);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      state[0] = g.x(i);
      state[1] = g.y(j);
      Vec action = act(state);
      double value;
      if (action.size() == 1) {
        value = action[0];
      } else {
        double ss = 0.0;
        for (double a : action) ss += a * a;
        value = std::sqrt(ss);
      }
      Vec row{state[0], state[1], value};
      if (partition)
        row.push_back(static_cast<double>(partition->nearest(state)));
      table.rows.push_back(std::move(row));
    }
  return table;
}

std::string to_csv(const VizTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const Vec& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("to_csv: row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += fmt_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string cell_fill(int index) {
  const double hue = std::fmod(static_cast<double>(index) * 137.50776405, 360.0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "hsl(%.1f,55%%,82%%)", hue);
  return buf;
}

}  // namespace

std::string render_svg(const EnvSpec& spec, const ActFn& act,
                       const VoronoiPartition* partition, int arrow_resolution,
                       int fill_resolution, int canvas) {
  Grid2 g = make_grid(spec, std::max(arrow_resolution, 2));
  if (fill_resolution < 2)
    throw std::invalid_argument("resolution must be at least 2");

  const double margin = 42.0;
  const double plot = static_cast<double>(canvas) - 2.0 * margin;
  auto to_px = [&](double x) { return margin + (x - g.x0) / (g.x1 - g.x0) * plot; };
  auto to_py = [&](double y) { return margin + (g.y1 - y) / (g.y1 - g.y0) * plot; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(canvas) + "\" height=\"" + std::to_string(canvas) +
         "\" viewBox=\"0 0 " + std::to_string(canvas) + " " +
         std::to_string(canvas) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(canvas) +
         "\" height=\"" + std::to_string(canvas) + "\" fill=\"white\"/>\n";

  std::vector<int> owner;
  if (partition) {
    // Cell fills sampled at pixel-cell centres, then boundary ticks where
    // the owning cell changes between horizontal or vertical neighbours.
    owner.resize(static_cast<std::size_t>(fill_resolution) *
                 static_cast<std::size_t>(fill_resolution));
    const double pw = plot / static_cast<double>(fill_resolution);
    Vec state(2);
    for (int i = 0; i < fill_resolution; ++i)
      for (int j = 0; j < fill_resolution; ++j) {
        state[0] = g.x0 + (g.x1 - g.x0) * (static_cast<double>(i) + 0.5) /
                              static_cast<double>(fill_resolution);
        state[1] = g.y0 + (g.y1 - g.y0) * (static_cast<double>(j) + 0.5) /
                              static_cast<double>(fill_resolution);
        owner[static_cast<std::size_t>(i * fill_resolution + j)] =
            partition->nearest(state);
      }
    for (int i = 0; i < fill_resolution; ++i)
      for (int j = 0; j < fill_resolution; ++j) {
        const int cell = owner[static_cast<std::size_t>(i * fill_resolution + j)];
        const double rx = margin + static_cast<double>(i) * pw;
        const double ry = margin + plot - static_cast<double>(j + 1) * pw;
        svg += "<rect x=\"" + px(rx) + "\" y=\"" + px(ry) + "\" width=\"" +
               px(pw + 0.5) + "\" height=\"" + px(pw + 0.5) + "\" fill=\"" +
               cell_fill(cell) + "\"/>\n";
      }
    svg += "<g stroke=\"#444444\" stroke-width=\"1\">\n";
    for (int i = 0; i < fill_resolution; ++i)
      for (int j = 0; j < fill_resolution; ++j) {
        const int cell = owner[static_cast<std::size_t>(i * fill_resolution + j)];
        const double rx = margin + static_cast<double>(i) * pw;
        const double ry = margin + plot - static_cast<double>(j + 1) * pw;
        if (i + 1 < fill_resolution &&
            owner[static_cast<std::size_t>((i + 1) * fill_resolution + j)] != cell)
          svg += "<line x1=\"" + px(rx + pw) + "\" y1=\"" + px(ry) +
                 "\" x2=\"" + px(rx + pw) + "\" y2=\"" + px(ry + pw) + "\"/>\n";
        if (j + 1 < fill_resolution &&
            owner[static_cast<std::size_t>(i * fill_resolution + j + 1)] != cell)
          svg += "<line x1=\"" + px(rx) + "\" y1=\"" + px(ry) + "\" x2=\"" +
                 px(rx + pw) + "\" y2=\"" + px(ry) + "\"/>\n";
      }
    svg += "</g>\n";
  }

  // Arrow field. 1-D actions point along the horizontal axis.
  VizTable quiver = quiver_data(spec, act, std::max(arrow_resolution, 2), nullptr);
  double max_mag = 0.0;
  for (const Vec& row : quiver.rows) {
    const double ax = row[2];
    const double ay = row.size() > 3 ? row[3] : 0.0;
    max_mag = std::max(max_mag, std::sqrt(ax * ax + ay * ay));
  }
  const double pitch = plot / static_cast<double>(std::max(arrow_resolution, 2) - 1);
  svg += "<g stroke=\"#1f4e79\" stroke-width=\"1.2\" fill=\"#1f4e79\">\n";
  for (const Vec& row : quiver.rows) {
    const double ax = row[2];
    const double ay = row.size() > 3 ? row[3] : 0.0;
    const double mag = std::sqrt(ax * ax + ay * ay);
    if (max_mag <= 0.0 || mag / max_mag < 1e-3) continue;
    const double cx = to_px(row[0]);
    const double cy = to_py(row[1]);
    const double len = 0.45 * pitch * (mag / max_mag);
    const double ux = ax / mag, uy = ay / mag;
    const double tx = cx + ux * len;
    const double ty = cy - uy * len;  // pixel y grows downward
    svg += "<line x1=\"" + px(cx) + "\" y1=\"" + px(cy) + "\" x2=\"" + px(tx) +
           "\" y2=\"" + px(ty) + "\"/>\n";
    const double hx = -ux * 0.3 * len, hy = uy * 0.3 * len;
    const double wx = uy * 0.15 * len, wy = ux * 0.15 * len;
    svg += "<polygon points=\"" + px(tx) + "," + px(ty) + " " +
           px(tx + hx + wx) + "," + px(ty + hy + wy) + " " + px(tx + hx - wx) +
           "," + px(ty + hy - wy) + "\"/>\n";
  }
  svg += "</g>\n";

  if (partition) {
    svg += "<g fill=\"#c0392b\" stroke=\"white\" stroke-width=\"1\">\n";
    for (const Vec& cw : partition->codewords())
      svg += "<circle cx=\"" + px(to_px(cw[0])) + "\" cy=\"" +
             px(to_py(cw[1])) + "\" r=\"4\"/>\n";
    svg += "</g>\n";
  }

  svg += "<rect x=\"" + px(margin) + "\" y=\"" + px(margin) + "\" width=\"" +
         px(plot) + "\" height=\"" + px(plot) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + px(margin + plot / 2.0) + "\" y=\"" +
         px(static_cast<double>(canvas) - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         spec.state_names[0] + "</text>\n";
  svg += "<text x=\"16\" y=\"" + px(margin + plot / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 16 " +
         px(margin + plot / 2.0) + ")\">" + spec.state_names[1] + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace vpd

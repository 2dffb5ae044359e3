#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vpd/common.hpp"
#include "vpd/envs.hpp"
#include "vpd/partition.hpp"

namespace vpd {

/// Five-number summary plus dispersion and Tukey outlier accounting.
struct SpreadStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double iqr = 0.0;
  std::size_t n_outliers = 0;   // strictly outside [q1 - 1.5 iqr, q3 + 1.5 iqr]
  double coverage = 1.0;        // (n - n_outliers) / n
  std::vector<double> outlier_values;  // ascending
};

/// Quantiles use linear interpolation at h = (n - 1) * p.
SpreadStats spread_stats(std::vector<double> values);

using ActFn = std::function<Vec(std::span<const double>)>;

struct EvalOutcome {
  std::vector<double> returns;
  std::vector<int> steps;
  std::vector<bool> terminated;  // reached a terminal state (not truncated)
  SpreadStats stats;             // over returns
};

/// Runs n seeded episodes; episode i uses its own stream derived from
/// (seed, i), so outcomes are independent of evaluation order and count.
EvalOutcome evaluate(const ActFn& act, Env& env, int n_episodes,
                     std::uint64_t seed);

std::string eval_report_json(const EvalOutcome& outcome,
                             const std::string& environment,
                             std::uint64_t seed);

/// Column-named numeric table; the CSV writer prints one row per entry.
struct VizTable {
  std::vector<std::string> columns;
  std::vector<Vec> rows;
};

/// Actions sampled on an inclusive resolution x resolution grid over the
/// state bounds. Columns: both state names, every action name, and the
/// owning cell index when a partition is supplied.
VizTable quiver_data(const EnvSpec& spec, const ActFn& act, int resolution,
                     const VoronoiPartition* partition = nullptr);

/// Like quiver_data but with a single magnitude column: the lone action
/// component for 1-D actions, the Euclidean norm otherwise.
VizTable heatmap_data(const EnvSpec& spec, const ActFn& act, int resolution,
                      const VoronoiPartition* partition = nullptr);

std::string to_csv(const VizTable& table);

/// Self-contained SVG: cell fills and sampled boundaries, an arrow field
/// of the policy's actions, and a dot per codeword. Partition optional.
std::string render_svg(const EnvSpec& spec, const ActFn& act,
                       const VoronoiPartition* partition,
                       int arrow_resolution = 24, int fill_resolution = 120,
                       int canvas = 640);

}  // namespace vpd

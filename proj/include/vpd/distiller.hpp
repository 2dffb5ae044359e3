#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpd/envs.hpp"
#include "vpd/linear_policy.hpp"
#include "vpd/partition.hpp"
#include "vpd/teachers.hpp"

namespace vpd {

/// Which epochs may edit the partition. kText freezes the last n_freeze
/// epochs; kLiteral allows edits only during the first n_freeze epochs.
enum class FreezeMode { kText, kLiteral };

struct DistillConfig {
  int n_epochs = 1000;
  int n_split = 20;
  int n_merge = 100;
  int n_freeze = 100;
  int n_reset = 500;
  double min_param_distance = 0.5;
  double min_pol_distance = 0.3;
  double max_pol_loss = 1e-4;
  bool one_split = false;

  TrainSettings train;

  bool use_reset = true;                 // periodic full buffer reset on/off
  bool split_reset_includes_self = true; // split also clears the split cell's buffer
  FreezeMode freeze_mode = FreezeMode::kText;
  int max_cells = 512;                   // safety cap; exceeding aborts the run
  std::uint64_t seed = 0;

  /// First epoch index at which the partition becomes immutable.
  int editable_end() const {
    return freeze_mode == FreezeMode::kText ? n_epochs - n_freeze : n_freeze;
  }

  void validate() const;
};

/// One teacher rollout: time-ordered states with the teacher's actions.
struct EpisodeTrace {
  std::vector<Vec> states;
  std::vector<Vec> actions;
  bool terminated = false;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
};

/// The distilled artifact: partition plus one linear subpolicy per cell.
struct DistilledPolicy {
  VoronoiPartition partition;
  std::vector<LinearPolicy> subpolicies;
  Bounds action_bounds;

  explicit DistilledPolicy(int dim) : partition(dim) {}

  int size() const { return partition.size(); }

  /// Nearest-cell lookup, linear prediction, then per-dimension clamping.
  Vec act(std::span<const double> state) const;
};

/// Buffers and optimizer state, aligned index-for-index with the subpolicies.
struct TrainingState {
  std::vector<ExperienceBuffer> buffers;
  std::vector<AdamState> opt;

  void append(const LinearPolicy& shape) {
    buffers.emplace_back();
    opt.emplace_back();
    opt.back().reset(shape);
  }
  void erase(int k) {
    buffers.erase(buffers.begin() + k);
    opt.erase(opt.begin() + k);
  }
};

struct SplitEvent {
  int trace_pos = 0;
  int cell = 0;        // cell that was split
  Vec state;           // trace state that became the new codeword
  double mean_loss = 0.0;
  double distance = 0.0;  // L1 from state to the cell's codeword
  int new_index = 0;
};

struct MergeEvent {
  int kept = 0;     // surviving cell (index before removal)
  int removed = 0;  // removed cell (index before removal)
  double distance = 0.0;  // L-infinity parameter distance
};

/// One record per distillation epoch (serialized as one JSON line).
struct EpochRecord {
  int epoch = 0;
  bool editable = false;
  std::vector<std::size_t> buffer_sizes;  // post-assignment, per cell
  std::vector<std::optional<double>> train_losses;  // per cell; empty buffer -> nullopt
  std::vector<SplitEvent> splits;
  std::vector<MergeEvent> merges;
  bool buffers_reset = false;
  int cells_after = 0;
};

std::string to_json_line(const EpochRecord& rec);

struct DistillResult {
  DistilledPolicy policy;
  std::vector<EpochRecord> log;
};

/// Rolls the teacher from a fresh reset until termination or truncation.
EpisodeTrace collect_episode(Env& env, const Teacher& teacher, Rng& rng);

/// Routes every (state, action) pair to the buffer of its nearest cell.
void assign_experiences(const DistilledPolicy& dp, const EpisodeTrace& trace,
                        std::vector<ExperienceBuffer>& buffers);

/// Walks the trace accumulating per-visit regional losses; inserts a new
/// codeword wherever the mean regional loss and codeword distance both
/// exceed their thresholds. Returns the number of splits performed.
int split_regions(DistilledPolicy& dp, TrainingState& ts,
                  const EpisodeTrace& trace, const Teacher& teacher,
                  const DistillConfig& cfg, Rng& init_rng,
                  std::vector<SplitEvent>* events = nullptr);

/// Removes cells whose subpolicy parameters are within min_param_distance
/// (L-infinity) of a Delaunay neighbour's. Returns the number of merges.
int merge_regions(DistilledPolicy& dp, TrainingState& ts,
                  const DistillConfig& cfg,
                  std::vector<MergeEvent>* events = nullptr);

/// Full distillation: episode collection, experience routing, per-cell
/// training, cadenced split/merge/reset during the editable phase, and a
/// train-only freeze phase. Deterministic given (cfg, env, teacher).
DistillResult run_distillation(const DistillConfig& cfg, Env& env,
                               const Teacher& teacher);

}  // namespace vpd

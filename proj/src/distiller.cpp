#include "vpd/distiller.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "vpd/rng.hpp"

namespace vpd {

void DistillConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1)
      throw std::invalid_argument(std::string(name) + " must be a positive integer");
  };
  positive(n_epochs, "n_epochs");
  positive(n_split, "n_split");
  positive(n_merge, "n_merge");
  positive(n_freeze, "n_freeze");
  positive(n_reset, "n_reset");
  positive(train.batch_size, "batch_size");
  positive(train.max_steps, "max_train_steps");
  positive(max_cells, "max_cells");
  if (n_freeze >= n_epochs)
    throw std::invalid_argument("n_freeze must be smaller than n_epochs");
  if (!(min_param_distance > 0.0))
    throw std::invalid_argument("min_param_distance must be positive");
  if (!(min_pol_distance > 0.0))
    throw std::invalid_argument("min_pol_distance must be positive");
  if (!(max_pol_loss > 0.0))
    throw std::invalid_argument("max_pol_loss must be positive");
  if (!(train.lr > 0.0))
    throw std::invalid_argument("lr must be positive");
}

Vec DistilledPolicy::act(std::span<const double> state) const {
  int cell = partition.nearest(state);
  Vec action = subpolicies[static_cast<std::size_t>(cell)].predict(state);
  return clamp_to(std::move(action), action_bounds);
}

EpisodeTrace collect_episode(Env& env, const Teacher& teacher, Rng& rng) {
  const EnvSpec& spec = env.spec();
  if (teacher.state_dim() != spec.state_dim ||
      teacher.action_dim() != spec.action_dim)
    throw std::invalid_argument("teacher dimensions do not match environment");

  EpisodeTrace trace;
  Vec state = env.reset(rng);
  while (true) {
    Vec action = teacher.act(state);
    trace.states.push_back(state);
    trace.actions.push_back(action);
    StepResult step = env.step(action);
    if (step.terminated || step.truncated) {
      trace.terminated = step.terminated;
      break;
    }
    state = std::move(step.next_state);
  }
  return trace;
}

void assign_experiences(const DistilledPolicy& dp, const EpisodeTrace& trace,
                        std::vector<ExperienceBuffer>& buffers) {
  if (buffers.size() != static_cast<std::size_t>(dp.size()))
    throw std::invalid_argument("buffer list does not match partition size");
  for (std::size_t t = 0; t < trace.size(); ++t) {
    int cell = dp.partition.nearest(trace.states[t]);
    buffers[static_cast<std::size_t>(cell)].add(trace.states[t], trace.actions[t]);
  }
}

namespace {

void reset_around(TrainingState& ts, const VoronoiPartition& partition,
                  int cell, bool include_self) {
  if (include_self) ts.buffers[static_cast<std::size_t>(cell)].clear();
  for (int nb : partition.neighbours(cell))
    ts.buffers[static_cast<std::size_t>(nb)].clear();
}

}  // namespace

int split_regions(DistilledPolicy& dp, TrainingState& ts,
                  const EpisodeTrace& trace, const Teacher& teacher,
                  const DistillConfig& cfg, Rng& init_rng,
                  std::vector<SplitEvent>* events) {
  if (trace.empty()) return 0;

  int n_splits = 0;
  int current = dp.partition.nearest(trace.states[0]);
  std::vector<double> losses;  // per-visit losses inside the current region
  double loss_sum = 0.0;

  for (std::size_t t = 0; t < trace.size(); ++t) {
    const Vec& s = trace.states[t];
    int cell = dp.partition.nearest(s);
    if (cell != current) {
      current = cell;
      losses.clear();
      loss_sum = 0.0;
    }
    Vec want = teacher.act(s);
    Vec got = dp.subpolicies[static_cast<std::size_t>(cell)].predict(s);
    double step_loss = mse(want, got);
    losses.push_back(step_loss);
    loss_sum += step_loss;

    double mean_loss = loss_sum / static_cast<double>(losses.size());
    double distance = dp.partition.l1_to(cell, s);
    if (mean_loss > cfg.max_pol_loss && distance > cfg.min_pol_distance) {
      int new_index = dp.partition.insert(s);
      dp.subpolicies.push_back(init_random(dp.partition.dim(),
                                           dp.subpolicies[0].action_dim,
                                           init_rng));
      ts.append(dp.subpolicies.back());
      reset_around(ts, dp.partition, cell, cfg.split_reset_includes_self);
      ts.buffers[static_cast<std::size_t>(new_index)].clear();
      if (events)
        events->push_back({static_cast<int>(t), cell, s, mean_loss, distance,
                           new_index});
      ++n_splits;
      if (cfg.one_split) return n_splits;
    }
  }
  return n_splits;
}

int merge_regions(DistilledPolicy& dp, TrainingState& ts,
                  const DistillConfig& cfg,
                  std::vector<MergeEvent>* events) {
  int n_merges = 0;
  int i = 0;
  while (i < dp.size()) {
    if (dp.size() < 2) break;
    bool removed = false;
    for (int j : dp.partition.neighbours(i)) {
      double distance = param_distance(dp.subpolicies[static_cast<std::size_t>(i)],
                                       dp.subpolicies[static_cast<std::size_t>(j)]);
      if (distance < cfg.min_param_distance) {
        if (events) events->push_back({i, j, distance});
        dp.partition.remove(j);
        dp.subpolicies.erase(dp.subpolicies.begin() + j);
        ts.erase(j);
        if (j < i) --i;
        reset_around(ts, dp.partition, i, true);
        ++n_merges;
        removed = true;
        break;  // neighbour set changed; recompute for the same cell
      }
    }
    if (!removed) ++i;
  }
  return n_merges;
}

DistillResult run_distillation(const DistillConfig& cfg, Env& env,
                               const Teacher& teacher) {
  cfg.validate();
  const EnvSpec& spec = env.spec();
  if (teacher.state_dim() != spec.state_dim ||
      teacher.action_dim() != spec.action_dim)
    throw std::invalid_argument("teacher dimensions do not match environment");

  DistillResult result{DistilledPolicy(spec.state_dim), {}};
  DistilledPolicy& dp = result.policy;
  dp.action_bounds = spec.action_bounds;
  TrainingState ts;
  Rng split_rng(derive_seed(cfg.seed, kStreamSplit, 0));
  const int editable_end = cfg.editable_end();

  result.log.reserve(static_cast<std::size_t>(cfg.n_epochs));
  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    Rng episode_rng(derive_seed(cfg.seed, kStreamEpisode,
                                static_cast<std::uint64_t>(epoch)));
    EpisodeTrace trace = collect_episode(env, teacher, episode_rng);

    if (epoch == 0) {
      dp.partition.insert(trace.states[0]);
      Rng init_rng(derive_seed(cfg.seed, kStreamInit, 0));
      dp.subpolicies.push_back(
          init_random(spec.state_dim, spec.action_dim, init_rng));
      ts.append(dp.subpolicies.back());
    }

    assign_experiences(dp, trace, ts.buffers);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.editable = epoch < editable_end;
    rec.buffer_sizes.reserve(ts.buffers.size());
    for (const ExperienceBuffer& buf : ts.buffers)
      rec.buffer_sizes.push_back(buf.size());

    rec.train_losses.resize(ts.buffers.size());
    for (int i = 0; i < dp.size(); ++i) {
      auto k = static_cast<std::size_t>(i);
      Rng train_rng(derive_seed(cfg.seed, kStreamTrain,
                                (static_cast<std::uint64_t>(epoch) << 16) |
                                    static_cast<std::uint64_t>(i)));
      TrainResult tr =
          train_epoch(dp.subpolicies[k], ts.opt[k], ts.buffers[k], cfg.train,
                      train_rng);
      if (tr.trained) rec.train_losses[k] = tr.mean_loss;
    }

    if (rec.editable && epoch > 0) {
      if (epoch % cfg.n_split == 0)
        split_regions(dp, ts, trace, teacher, cfg, split_rng, &rec.splits);
      if (epoch % cfg.n_merge == 0)
        merge_regions(dp, ts, cfg, &rec.merges);
      if (cfg.use_reset && epoch % cfg.n_reset == 0) {
        for (ExperienceBuffer& buf : ts.buffers) buf.clear();
        rec.buffers_reset = true;
      }
    }

    if (dp.size() > cfg.max_cells)
      throw RuntimeAbort("cell count " + std::to_string(dp.size()) +
                         " exceeded the cap of " + std::to_string(cfg.max_cells));

    rec.cells_after = dp.size();
    result.log.push_back(std::move(rec));
  }
  return result;
}

std::string to_json_line(const EpochRecord& rec) {
  nlohmann::json j;
  j["epoch"] = rec.epoch;
  j["editable"] = rec.editable;
  j["buffer_sizes"] = rec.buffer_sizes;
  nlohmann::json losses = nlohmann::json::array();
  for (const auto& loss : rec.train_losses) {
    if (loss)
      losses.push_back(*loss);
    else
      losses.push_back(nullptr);
  }
  j["train_losses"] = std::move(losses);
  nlohmann::json splits = nlohmann::json::array();
  for (const SplitEvent& ev : rec.splits) {
    splits.push_back({{"trace_pos", ev.trace_pos},
                      {"cell", ev.cell},
                      {"state", ev.state},
                      {"mean_loss", ev.mean_loss},
                      {"distance", ev.distance},
                      {"new_index", ev.new_index}});
  }
  j["splits"] = std::move(splits);
  nlohmann::json merges = nlohmann::json::array();
  for (const MergeEvent& ev : rec.merges) {
    merges.push_back({{"kept", ev.kept},
                      {"removed", ev.removed},
                      {"distance", ev.distance}});
  }
  j["merges"] = std::move(merges);
  j["buffers_reset"] = rec.buffers_reset;
  j["cells_after"] = rec.cells_after;
  return j.dump();
}

}  // namespace vpd

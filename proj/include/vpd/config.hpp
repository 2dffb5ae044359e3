#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vpd/distiller.hpp"

namespace vpd {

/// Fully resolved run settings: environment + teacher + distillation
/// parameters + evaluation size and output directory.
struct RunConfig {
  std::string environment;
  std::string teacher;  // "oracle:<tag>" or "file:<path>"
  std::string out_dir = "out";
  int eval_episodes = 1000;
  DistillConfig distill;
};

/// Sparse overlay of RunConfig fields; unset fields keep lower-precedence
/// values. Produced by the config-file parser and by CLI flags.
struct ConfigPatch {
  std::optional<std::string> environment;
  std::optional<std::string> teacher;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> eval_episodes;

  std::optional<int> n_epochs, n_split, n_merge, n_freeze, n_reset;
  std::optional<double> min_param_distance, min_pol_distance, max_pol_loss;
  std::optional<bool> one_split;
  std::optional<double> lr;
  std::optional<int> batch_size, max_train_steps;
  std::optional<bool> use_reset, split_reset_includes_self;
  std::optional<std::string> freeze_mode;  // "text" | "literal"
  std::optional<int> max_cells;
};

/// Parses a flat JSON object of config keys. Unknown keys and wrong value
/// types are reported by name.
ConfigPatch parse_config_text(const std::string& json_text);

/// Per-environment distillation defaults; generic fallback for names
/// without a tuned preset.
DistillConfig default_distill_config(const std::string& environment);

/// defaults <- file <- flags, with the environment itself resolved
/// flags-first so it can select the right defaults.
RunConfig resolve_config(const ConfigPatch& file, const ConfigPatch& flags);

/// Canonical JSON of everything that influences a run's outcome.
std::string config_canonical_json(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

FreezeMode parse_freeze_mode(const std::string& text);

}  // namespace vpd

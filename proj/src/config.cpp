#include "vpd/config.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace vpd {

FreezeMode parse_freeze_mode(const std::string& text) {
  if (text == "text") return FreezeMode::kText;
  if (text == "literal") return FreezeMode::kLiteral;
  throw std::invalid_argument("freeze_mode must be 'text' or 'literal', got '" +
                              text + "'");
}

namespace {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("config key '") + key +
                                "' has the wrong type");
  }
}

}  // namespace

ConfigPatch parse_config_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("config root must be a JSON object");

  static const char* known[] = {
      "environment",      "teacher",           "out_dir",
      "seed",             "eval_episodes",     "n_epochs",
      "n_split",          "n_merge",           "n_freeze",
      "n_reset",          "min_param_distance", "min_pol_distance",
      "max_pol_loss",     "one_split",         "lr",
      "batch_size",       "max_train_steps",   "use_reset",
      "split_reset_includes_self",             "freeze_mode",
      "max_cells"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok)
      throw std::invalid_argument("unknown config key '" + item.key() + "'");
  }

  ConfigPatch p;
  read_key(j, "environment", p.environment);
  read_key(j, "teacher", p.teacher);
  read_key(j, "out_dir", p.out_dir);
  read_key(j, "seed", p.seed);
  read_key(j, "eval_episodes", p.eval_episodes);
  read_key(j, "n_epochs", p.n_epochs);
  read_key(j, "n_split", p.n_split);
  read_key(j, "n_merge", p.n_merge);
  read_key(j, "n_freeze", p.n_freeze);
  read_key(j, "n_reset", p.n_reset);
  read_key(j, "min_param_distance", p.min_param_distance);
  read_key(j, "min_pol_distance", p.min_pol_distance);
  read_key(j, "max_pol_loss", p.max_pol_loss);
  read_key(j, "one_split", p.one_split);
  read_key(j, "lr", p.lr);
  read_key(j, "batch_size", p.batch_size);
  read_key(j, "max_train_steps", p.max_train_steps);
  read_key(j, "use_reset", p.use_reset);
  read_key(j, "split_reset_includes_self", p.split_reset_includes_self);
  read_key(j, "freeze_mode", p.freeze_mode);
  read_key(j, "max_cells", p.max_cells);
  if (p.freeze_mode) parse_freeze_mode(*p.freeze_mode);  // validate early
  return p;
}

DistillConfig default_distill_config(const std::string& environment) {
  DistillConfig cfg;
  if (environment == "simplegoal-v0") {
    cfg.n_epochs = 5000;
    cfg.n_split = 20;
    cfg.n_merge = 100;
    cfg.n_freeze = 1000;
    cfg.n_reset = 500;
    cfg.min_param_distance = 0.5;
    cfg.min_pol_distance = 0.3;
    cfg.max_pol_loss = 0.0001;
    cfg.one_split = false;
  } else if (environment == "mountaincarcontinuous-v0") {
    cfg.n_epochs = 2000;
    cfg.n_split = 50;
    cfg.n_merge = 100;
    cfg.n_freeze = 400;
    cfg.n_reset = 500;
    cfg.min_param_distance = 0.3;
    cfg.min_pol_distance = 0.04;
    cfg.max_pol_loss = 0.00001;
    cfg.one_split = false;
  }
  return cfg;
}

namespace {

template <typename T, typename U>
void apply(const std::optional<T>& src, U& dst) {
  if (src) dst = static_cast<U>(*src);
}

void apply_patch(const ConfigPatch& p, RunConfig& cfg) {
  apply(p.teacher, cfg.teacher);
  apply(p.out_dir, cfg.out_dir);
  apply(p.eval_episodes, cfg.eval_episodes);
  apply(p.seed, cfg.distill.seed);
  apply(p.n_epochs, cfg.distill.n_epochs);
  apply(p.n_split, cfg.distill.n_split);
  apply(p.n_merge, cfg.distill.n_merge);
  apply(p.n_freeze, cfg.distill.n_freeze);
  apply(p.n_reset, cfg.distill.n_reset);
  apply(p.min_param_distance, cfg.distill.min_param_distance);
  apply(p.min_pol_distance, cfg.distill.min_pol_distance);
  apply(p.max_pol_loss, cfg.distill.max_pol_loss);
  apply(p.one_split, cfg.distill.one_split);
  apply(p.lr, cfg.distill.train.lr);
  apply(p.batch_size, cfg.distill.train.batch_size);
  apply(p.max_train_steps, cfg.distill.train.max_steps);
  apply(p.use_reset, cfg.distill.use_reset);
  apply(p.split_reset_includes_self, cfg.distill.split_reset_includes_self);
  if (p.freeze_mode) cfg.distill.freeze_mode = parse_freeze_mode(*p.freeze_mode);
  apply(p.max_cells, cfg.distill.max_cells);
}

}  // namespace

RunConfig resolve_config(const ConfigPatch& file, const ConfigPatch& flags) {
  std::string environment;
  if (flags.environment)
    environment = *flags.environment;
  else if (file.environment)
    environment = *file.environment;
  else
    throw std::invalid_argument(
        "no environment given (set 'environment' in the config or pass --env)");

  RunConfig cfg;
  cfg.environment = environment;
  cfg.distill = default_distill_config(environment);
  apply_patch(file, cfg);
  apply_patch(flags, cfg);
  if (cfg.eval_episodes < 1)
    throw std::invalid_argument("eval_episodes must be a positive integer");
  return cfg;
}

std::string config_canonical_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["environment"] = cfg.environment;
  j["teacher"] = cfg.teacher;
  j["seed"] = cfg.distill.seed;
  j["n_epochs"] = cfg.distill.n_epochs;
  j["n_split"] = cfg.distill.n_split;
  j["n_merge"] = cfg.distill.n_merge;
  j["n_freeze"] = cfg.distill.n_freeze;
  j["n_reset"] = cfg.distill.n_reset;
  j["min_param_distance"] = cfg.distill.min_param_distance;
  j["min_pol_distance"] = cfg.distill.min_pol_distance;
  j["max_pol_loss"] = cfg.distill.max_pol_loss;
  j["one_split"] = cfg.distill.one_split;
  j["lr"] = cfg.distill.train.lr;
  j["batch_size"] = cfg.distill.train.batch_size;
  j["max_train_steps"] = cfg.distill.train.max_steps;
  j["use_reset"] = cfg.distill.use_reset;
  j["split_reset_includes_self"] = cfg.distill.split_reset_includes_self;
  j["freeze_mode"] =
      cfg.distill.freeze_mode == FreezeMode::kText ? "text" : "literal";
  j["max_cells"] = cfg.distill.max_cells;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vpd

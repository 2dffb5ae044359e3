#include "vpd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vpd/bundle.hpp"
#include "vpd/config.hpp"
#include "vpd/distiller.hpp"
#include "vpd/envs.hpp"
#include "vpd/eval_report.hpp"
#include "vpd/teachers.hpp"

namespace vpd {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open '" + path.string() +
                                "' for writing");
  out << text;
  if (!out)
    throw std::runtime_error("failed while writing '" + path.string() + "'");
}

/// Flags shared by the subcommands; each maps onto a ConfigPatch field so
/// flag > file > default precedence falls out of resolve_config.
struct CommonFlags {
  std::string config_path;
  ConfigPatch patch;

  void attach(CLI::App* cmd, bool with_teacher) {
    cmd->add_option("--config", config_path,
                    "JSON config file (flat keys; flags win over it)");
    cmd->add_option("--env", patch.environment, "environment name");
    if (with_teacher)
      cmd->add_option("--teacher", patch.teacher,
                      "teacher source: oracle:<tag> or file:<path>");
    cmd->add_option("--seed", patch.seed, "master seed");
    cmd->add_option("--out", patch.out_dir, "output directory");
    cmd->add_option("--freeze-mode", patch.freeze_mode,
                    "when partition edits are allowed: 'text' freezes the "
                    "last n_freeze epochs, 'literal' edits only the first "
                    "n_freeze epochs")
        ->check(CLI::IsMember({"text", "literal"}));
  }

  RunConfig resolve() const {
    ConfigPatch file;
    if (!config_path.empty()) file = parse_config_text(read_file(config_path));
    return resolve_config(file, patch);
  }
};

std::string fmt_stat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_stats(const SpreadStats& s) {
  std::cout << "episodes:   " << s.n << "\n"
            << "mean:       " << fmt_stat(s.mean) << "\n"
            << "stddev:     " << fmt_stat(s.stddev) << "\n"
            << "min:        " << fmt_stat(s.min) << "\n"
            << "q1:         " << fmt_stat(s.q1) << "\n"
            << "median:     " << fmt_stat(s.median) << "\n"
            << "q3:         " << fmt_stat(s.q3) << "\n"
            << "max:        " << fmt_stat(s.max) << "\n"
            << "iqr:        " << fmt_stat(s.iqr) << "\n"
            << "outliers:   " << s.n_outliers << "\n"
            << "coverage:   " << fmt_stat(s.coverage) << "\n";
}

int cmd_distill(const CommonFlags& flags) {
  RunConfig cfg = flags.resolve();
  if (cfg.teacher.empty())
    throw std::invalid_argument(
        "no teacher given (set 'teacher' in the config or pass --teacher)");

  std::unique_ptr<Env> env = make_env(cfg.environment);
  std::unique_ptr<Teacher> teacher = make_teacher(cfg.teacher);

  DistillResult result = run_distillation(cfg.distill, *env, *teacher);

  fs::create_directories(cfg.out_dir);
  PolicyBundle bundle(cfg.environment, std::move(result.policy));
  bundle.has_provenance = true;
  bundle.seed = cfg.distill.seed;
  bundle.config_hash = config_hash(cfg);
  const fs::path bundle_path = fs::path(cfg.out_dir) / "bundle.json";
  save_bundle(bundle, bundle_path.string());

  std::string events;
  for (const EpochRecord& rec : result.log) events += to_json_line(rec) + "\n";
  const fs::path events_path = fs::path(cfg.out_dir) / "events.jsonl";
  write_file(events_path, events);

  const fs::path config_path = fs::path(cfg.out_dir) / "resolved_config.json";
  write_file(config_path,
             nlohmann::ordered_json::parse(config_canonical_json(cfg)).dump(2) +
                 "\n");

  std::cout << "distilled " << cfg.environment << " into "
            << bundle.policy.size() << " cells over " << cfg.distill.n_epochs
            << " epochs\n"
            << "bundle:  " << bundle_path.string() << "\n"
            << "events:  " << events_path.string() << "\n"
            << "config:  " << config_path.string() << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& bundle_path,
             int episodes, bool out_set) {
  if (episodes < 1)
    throw std::invalid_argument("--episodes must be a positive integer");

  std::uint64_t seed = flags.patch.seed.value_or(0);
  std::string environment;
  std::unique_ptr<Env> env;
  ActFn act;
  PolicyBundle bundle;
  std::unique_ptr<Teacher> teacher;

  const bool have_teacher =
      flags.patch.teacher.has_value() || !flags.config_path.empty();
  if (!bundle_path.empty()) {
    bundle = load_bundle(bundle_path);
    environment = bundle.environment;
    env = make_env(environment);
    act = [&bundle](std::span<const double> s) { return bundle.policy.act(s); };
  } else if (have_teacher) {
    RunConfig cfg = flags.resolve();
    if (cfg.teacher.empty())
      throw std::invalid_argument(
          "no teacher given (set 'teacher' in the config or pass --teacher)");
    environment = cfg.environment;
    env = make_env(environment);
    teacher = make_teacher(cfg.teacher);
    act = [&teacher](std::span<const double> s) {
      return teacher->act(Vec(s.begin(), s.end()));
    };
  } else {
    throw std::invalid_argument("eval needs --bundle, or --env with --teacher");
  }

  EvalOutcome outcome = evaluate(act, *env, episodes, seed);
  std::cout << "environment: " << environment << "\n";
  print_stats(outcome.stats);

  if (out_set) {
    const std::string out_dir = flags.patch.out_dir.value_or("out");
    fs::create_directories(out_dir);
    const fs::path report_path = fs::path(out_dir) / "report.json";
    write_file(report_path, eval_report_json(outcome, environment, seed));
    std::cout << "report:     " << report_path.string() << "\n";
  }
  return 0;
}

int cmd_inspect(const std::string& bundle_path) {
  PolicyBundle bundle = load_bundle(bundle_path);
  std::cout << render_inspect_table(bundle);
  return 0;
}

int cmd_viz(const std::string& bundle_path, int resolution,
            const std::string& out_dir) {
  if (resolution < 2)
    throw std::invalid_argument("--resolution must be at least 2");
  PolicyBundle bundle = load_bundle(bundle_path);
  if (bundle.policy.partition.dim() != 2)
    throw std::invalid_argument("visualization requires a 2-D state space");

  std::unique_ptr<Env> env = make_env(bundle.environment);
  const EnvSpec& spec = env->spec();
  ActFn act = [&bundle](std::span<const double> s) {
    return bundle.policy.act(s);
  };

  fs::create_directories(out_dir);
  const fs::path quiver_path = fs::path(out_dir) / "quiver.csv";
  const fs::path heatmap_path = fs::path(out_dir) / "heatmap.csv";
  const fs::path svg_path = fs::path(out_dir) / "policy.svg";
  write_file(quiver_path,
             to_csv(quiver_data(spec, act, resolution, &bundle.policy.partition)));
  write_file(heatmap_path,
             to_csv(heatmap_data(spec, act, resolution, &bundle.policy.partition)));
  write_file(svg_path, render_svg(spec, act, &bundle.policy.partition,
                                  resolution));
  std::cout << "quiver:  " << quiver_path.string() << "\n"
            << "heatmap: " << heatmap_path.string() << "\n"
            << "svg:     " << svg_path.string() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Distill a black-box control policy into per-cell linear "
               "policies over a Voronoi partition"};
  app.name("vpd");
  app.require_subcommand(1);

  CommonFlags distill_flags;
  CLI::App* distill = app.add_subcommand(
      "distill", "train a partitioned linear policy from a teacher");
  distill_flags.attach(distill, true);

  CommonFlags eval_flags;
  std::string eval_bundle;
  int eval_episodes = 1000;
  CLI::App* eval = app.add_subcommand(
      "eval", "run seeded evaluation episodes and report return statistics");
  eval_flags.attach(eval, true);
  eval->add_option("--bundle", eval_bundle, "policy bundle to evaluate");
  eval->add_option("--episodes", eval_episodes, "number of episodes");

  std::string inspect_bundle;
  CLI::App* inspect = app.add_subcommand(
      "inspect", "print the cell table of a policy bundle");
  inspect->add_option("--bundle", inspect_bundle, "policy bundle to inspect")
      ->required();

  std::string viz_bundle;
  std::string viz_out = "out";
  int viz_resolution = 24;
  CLI::App* viz = app.add_subcommand(
      "viz", "export quiver/heatmap CSV and an SVG of the partition");
  viz->add_option("--bundle", viz_bundle, "policy bundle to render")
      ->required();
  viz->add_option("--resolution", viz_resolution, "grid resolution");
  viz->add_option("--out", viz_out, "output directory");

  int rc = 0;
  distill->callback([&] { rc = cmd_distill(distill_flags); });
  eval->callback([&] {
    rc = cmd_eval(eval_flags, eval_bundle, eval_episodes,
                  eval_flags.patch.out_dir.has_value());
  });
  inspect->callback([&] { rc = cmd_inspect(inspect_bundle); });
  viz->callback([&] { rc = cmd_viz(viz_bundle, viz_resolution, viz_out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const RuntimeAbort& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace vpd

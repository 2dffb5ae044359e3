#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "vpd/bundle.hpp"
#include "vpd/cli.hpp"

namespace fs = std::filesystem;

namespace {

/// Runs the CLI in-process with stdout/stderr captured.
struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  CliResult r;
  try {
    r.code = vpd::run_cli(args);
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("vpd-cli-" + tag + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  return path.string();
}

int count_lines(const fs::path& path) {
  std::ifstream f(path);
  int n = 0;
  std::string line;
  while (std::getline(f, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("bare invocation and unknown flags are usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"distill", "--no-such-flag"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("distill requires an environment and a teacher") {
  CliResult no_env = run({"distill"});
  CHECK(no_env.code == 2);
  CHECK(no_env.err.find("no environment given") != std::string::npos);

  CliResult no_teacher = run({"distill", "--env", "simplegoal-v0"});
  CHECK(no_teacher.code == 2);
  CHECK(no_teacher.err.find("no teacher given") != std::string::npos);

  CHECK(run({"distill", "--env", "atlantis-v0", "--teacher",
             "oracle:simplegoal_potential_field"})
            .code == 2);
}

TEST_CASE("a small distill run writes the three artifacts") {
  const fs::path dir = fresh_dir("distill");
  const std::string cfg = write_text(dir / "config.json", R"({
    "environment": "simplegoal-v0",
    "teacher": "oracle:simplegoal_potential_field",
    "n_epochs": 12, "n_freeze": 4, "n_split": 3, "n_merge": 6,
    "n_reset": 6, "seed": 21
  })");
  CliResult r = run({"distill", "--config", cfg, "--out",
                     (dir / "run").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "run" / "bundle.json"));
  CHECK(fs::exists(dir / "run" / "events.jsonl"));
  CHECK(fs::exists(dir / "run" / "resolved_config.json"));
  CHECK(count_lines(dir / "run" / "events.jsonl") == 12);
  CHECK(r.out.find("cells") != std::string::npos);

  vpd::PolicyBundle bundle =
      vpd::load_bundle((dir / "run" / "bundle.json").string());
  CHECK(bundle.environment == "simplegoal-v0");
  CHECK(bundle.has_provenance);
  CHECK(bundle.seed == 21);
  CHECK(bundle.config_hash.size() == 16);
  fs::remove_all(dir);
}

TEST_CASE("flags override the config file on a distill run") {
  const fs::path dir = fresh_dir("flags");
  const std::string cfg = write_text(dir / "config.json", R"({
    "environment": "simplegoal-v0",
    "teacher": "oracle:simplegoal_potential_field",
    "n_epochs": 8, "n_freeze": 2, "seed": 1
  })");
  CliResult r = run({"distill", "--config", cfg, "--seed", "2", "--out",
                     (dir / "run").string()});
  CHECK(r.code == 0);
  vpd::PolicyBundle bundle =
      vpd::load_bundle((dir / "run" / "bundle.json").string());
  CHECK(bundle.seed == 2);
  auto resolved = nlohmann::json::parse(
      std::ifstream((dir / "run" / "resolved_config.json").string()));
  CHECK(resolved["seed"] == 2);
  CHECK(resolved["n_epochs"] == 8);
  fs::remove_all(dir);
}

TEST_CASE("eval scores a saved bundle and optionally writes a report") {
  const fs::path dir = fresh_dir("eval");
  const fs::path bundle_path = dir / "bundle.json";
  vpd::save_bundle(fixtures::goal_policy_bundle(), bundle_path.string());

  CliResult bare = run({"eval", "--bundle", bundle_path.string(),
                        "--episodes", "25", "--seed", "11"});
  CHECK(bare.code == 0);
  CHECK(bare.out.find("mean") != std::string::npos);
  CHECK(bare.out.find("simplegoal-v0") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "report.json"));

  CliResult saved = run({"eval", "--bundle", bundle_path.string(),
                         "--episodes", "25", "--seed", "11", "--out",
                         dir.string()});
  CHECK(saved.code == 0);
  REQUIRE(fs::exists(dir / "report.json"));
  auto j = nlohmann::json::parse(std::ifstream((dir / "report.json").string()));
  CHECK(j["episodes"] == 25);
  CHECK(j["seed"] == 11);
  fs::remove_all(dir);
}

TEST_CASE("eval can score a teacher directly") {
  CliResult r = run({"eval", "--env", "simplegoal-v0", "--teacher",
                     "oracle:simplegoal_potential_field", "--episodes", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mean") != std::string::npos);

  CliResult neither = run({"eval", "--episodes", "5"});
  CHECK(neither.code == 2);
  CHECK(neither.err.find("eval needs --bundle, or --env with --teacher") !=
        std::string::npos);
}

TEST_CASE("inspect prints the cell table") {
  const fs::path dir = fresh_dir("inspect");
  const fs::path bundle_path = dir / "bundle.json";
  vpd::save_bundle(fixtures::goal_policy_bundle(), bundle_path.string());
  CliResult r = run({"inspect", "--bundle", bundle_path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("cells: 13") != std::string::npos);
  CHECK(r.out.find("-0.148x-0.021y-0.055") != std::string::npos);

  CHECK(run({"inspect", "--bundle", (dir / "missing.json").string()}).code ==
        2);
  fs::remove_all(dir);
}

TEST_CASE("viz renders the CSV tables and the SVG scene") {
  const fs::path dir = fresh_dir("viz");
  const fs::path bundle_path = dir / "bundle.json";
  vpd::save_bundle(fixtures::goal_policy_bundle(), bundle_path.string());
  CliResult r = run({"viz", "--bundle", bundle_path.string(), "--resolution",
                     "7", "--out", dir.string()});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(dir / "quiver.csv"));
  REQUIRE(fs::exists(dir / "heatmap.csv"));
  REQUIRE(fs::exists(dir / "policy.svg"));
  CHECK(count_lines(dir / "quiver.csv") == 50);  // header + 7 x 7 samples

  std::ifstream q(dir / "quiver.csv");
  std::string header;
  std::getline(q, header);
  CHECK(header == "x,y,dx,dy,cell");

  CHECK(run({"viz", "--bundle", bundle_path.string(), "--resolution", "1",
             "--out", dir.string()})
            .code == 2);
  fs::remove_all(dir);
}

TEST_CASE("viz refuses bundles whose state space is not planar") {
  const fs::path dir = fresh_dir("viz1d");
  const std::string bundle_path = write_text(dir / "line.json", R"({
    "format_version": "1",
    "environment": "custom",
    "state_dim": 1,
    "action_dim": 1,
    "codewords": [[0.5]],
    "subpolicies": [{"weights": [[1.0]], "bias": [0.0]}],
    "action_bounds": [[-1.0, 1.0]]
  })");
  CliResult r = run({"viz", "--bundle", bundle_path, "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("visualization requires a 2-D state space") !=
        std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("a run that blows the cell cap exits with the abort code") {
  const fs::path dir = fresh_dir("cap");
  const std::string cfg = write_text(dir / "config.json", R"({
    "environment": "simplegoal-v0",
    "teacher": "oracle:simplegoal_potential_field",
    "n_epochs": 30, "n_freeze": 5, "n_split": 1, "n_merge": 100,
    "max_pol_loss": 1e-12, "min_pol_distance": 0.02,
    "max_cells": 4, "seed": 9
  })");
  CliResult r = run({"distill", "--config", cfg, "--out",
                     (dir / "run").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("exceeded the cap") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("config file errors surface as usage errors") {
  const fs::path dir = fresh_dir("badcfg");
  const std::string bad = write_text(dir / "bad.json", "{nope");
  CHECK(run({"distill", "--config", bad}).code == 2);
  const std::string unknown =
      write_text(dir / "unknown.json", R"({"wibble": 3})");
  CliResult r = run({"distill", "--config", unknown});
  CHECK(r.code == 2);
  CHECK(r.err.find("wibble") != std::string::npos);
  CHECK(run({"distill", "--config", (dir / "absent.json").string()}).code ==
        2);
  fs::remove_all(dir);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vpd/bundle.hpp"
#include "vpd/cli.hpp"
#include "vpd/config.hpp"
#include "vpd/distiller.hpp"
#include "vpd/envs.hpp"
#include "vpd/eval_report.hpp"
#include "vpd/partition.hpp"
#include "vpd/teachers.hpp"

namespace py = pybind11;

namespace {

vpd::PolicyBundle run_from_config(const std::string& config_json,
                                  std::string* events_out) {
  vpd::ConfigPatch file = vpd::parse_config_text(config_json);
  vpd::RunConfig cfg = vpd::resolve_config(file, {});
  if (cfg.teacher.empty())
    throw std::invalid_argument("config must set 'teacher'");
  auto env = vpd::make_env(cfg.environment);
  auto teacher = vpd::make_teacher(cfg.teacher);
  vpd::DistillResult result = vpd::run_distillation(cfg.distill, *env, *teacher);

  vpd::PolicyBundle bundle(cfg.environment, std::move(result.policy));
  bundle.has_provenance = true;
  bundle.seed = cfg.distill.seed;
  bundle.config_hash = vpd::config_hash(cfg);
  if (events_out) {
    events_out->clear();
    for (const vpd::EpochRecord& rec : result.log)
      *events_out += vpd::to_json_line(rec) + "\n";
  }
  return bundle;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Voronoi-partitioned linear policy distillation";

  py::class_<vpd::VoronoiPartition>(m, "Partition")
      .def(py::init<int>(), py::arg("dim"))
      .def("insert", &vpd::VoronoiPartition::insert, py::arg("point"))
      .def("remove", &vpd::VoronoiPartition::remove, py::arg("index"))
      .def(
          "nearest",
          [](const vpd::VoronoiPartition& p, const vpd::Vec& state) {
            return p.nearest(state);
          },
          py::arg("state"))
      .def("neighbours", &vpd::VoronoiPartition::neighbours, py::arg("index"))
      .def("adjacency", &vpd::VoronoiPartition::adjacency)
      .def("codewords",
           [](const vpd::VoronoiPartition& p) { return p.codewords(); })
      .def_property_readonly("dim", &vpd::VoronoiPartition::dim)
      .def("__len__", &vpd::VoronoiPartition::size);

  py::class_<vpd::PolicyBundle>(m, "Bundle")
      .def_static("loads", &vpd::bundle_from_json_text, py::arg("text"))
      .def_static("load", &vpd::load_bundle, py::arg("path"))
      .def("dumps",
           [](const vpd::PolicyBundle& b) { return vpd::bundle_to_json_text(b); })
      .def("save",
           [](const vpd::PolicyBundle& b, const std::string& path) {
             vpd::save_bundle(b, path);
           },
           py::arg("path"))
      .def(
          "act",
          [](const vpd::PolicyBundle& b, const vpd::Vec& state) {
            return b.policy.act(state);
          },
          py::arg("state"))
      .def(
          "nearest",
          [](const vpd::PolicyBundle& b, const vpd::Vec& state) {
            return b.policy.partition.nearest(state);
          },
          py::arg("state"))
      .def("codewords",
           [](const vpd::PolicyBundle& b) {
             return b.policy.partition.codewords();
           })
      .def("inspect",
           [](const vpd::PolicyBundle& b) { return vpd::render_inspect_table(b); })
      .def_property_readonly(
          "environment",
          [](const vpd::PolicyBundle& b) { return b.environment; })
      .def_property_readonly(
          "n_cells", [](const vpd::PolicyBundle& b) { return b.policy.size(); });

  m.def("spread_stats", [](const std::vector<double>& values) {
    vpd::SpreadStats s = vpd::spread_stats(values);
    py::dict d;
    d["n"] = s.n;
    d["mean"] = s.mean;
    d["stddev"] = s.stddev;
    d["min"] = s.min;
    d["q1"] = s.q1;
    d["median"] = s.median;
    d["q3"] = s.q3;
    d["max"] = s.max;
    d["iqr"] = s.iqr;
    d["n_outliers"] = s.n_outliers;
    d["coverage"] = s.coverage;
    d["outlier_values"] = s.outlier_values;
    return d;
  });

  m.def("distill_json", [](const std::string& config_json) {
    std::string events;
    vpd::PolicyBundle bundle = run_from_config(config_json, &events);
    return py::make_tuple(vpd::bundle_to_json_text(bundle), events);
  });

  m.def("evaluate_bundle_json",
        [](const std::string& bundle_json, int episodes, std::uint64_t seed) {
          vpd::PolicyBundle b = vpd::bundle_from_json_text(bundle_json);
          auto env = vpd::make_env(b.environment);
          vpd::EvalOutcome out = vpd::evaluate(
              [&b](std::span<const double> s) { return b.policy.act(s); },
              *env, episodes, seed);
          return vpd::eval_report_json(out, b.environment, seed);
        });

  m.def("evaluate_teacher_json",
        [](const std::string& environment, const std::string& teacher,
           int episodes, std::uint64_t seed) {
          auto env = vpd::make_env(environment);
          auto t = vpd::make_teacher(teacher);
          if (t->state_dim() != env->spec().state_dim ||
              t->action_dim() != env->spec().action_dim)
            throw std::invalid_argument(
                "teacher dimensions do not match environment");
          vpd::EvalOutcome out = vpd::evaluate(
              [&t](std::span<const double> s) {
                return t->act(vpd::Vec(s.begin(), s.end()));
              },
              *env, episodes, seed);
          return vpd::eval_report_json(out, environment, seed);
        });

  m.def("render_svg", [](const std::string& bundle_json, int resolution) {
    vpd::PolicyBundle b = vpd::bundle_from_json_text(bundle_json);
    auto env = vpd::make_env(b.environment);
    return vpd::render_svg(
        env->spec(),
        [&b](std::span<const double> s) { return b.policy.act(s); },
        &b.policy.partition, resolution);
  });

  m.def("quiver_csv", [](const std::string& bundle_json, int resolution) {
    vpd::PolicyBundle b = vpd::bundle_from_json_text(bundle_json);
    auto env = vpd::make_env(b.environment);
    return vpd::to_csv(vpd::quiver_data(
        env->spec(),
        [&b](std::span<const double> s) { return b.policy.act(s); },
        resolution, &b.policy.partition));
  });

  m.def("run_cli", &vpd::run_cli, py::arg("args"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "critwave/acceptance.hpp"
#include "critwave/experiment.hpp"
#include "critwave/functionals.hpp"
#include "critwave/ground_state.hpp"

namespace py = pybind11;
using nlohmann::json;

// Structured values cross the boundary as JSON text; the Python package
// decodes them.
namespace {

std::string constants(int d) {
  json j;
  to_json(j, critwave::cached_ground_state_constants(d));
  return j.dump();
}

std::string check_coefficient(const std::string& spec_json, int d) {
  const auto spec = critwave::coefficient_from_json(json::parse(spec_json));
  const auto grid = critwave::condition_scan_grid(d);
  json reports = json::array();
  for (const auto& r : {critwave::check_defocusing_condition(spec, grid), critwave::check_focusing_condition(spec, grid),
                        critwave::check_decay_condition(spec, grid)}) {
    json jr;
    to_json(jr, r);
    reports.push_back(jr);
  }
  return reports.dump();
}

py::tuple run(const std::string& config_json, const std::string& out_dir) {
  const auto cfg = critwave::config_from_json(json::parse(config_json));
  critwave::RunResult r;
  {
    py::gil_scoped_release release;
    r = critwave::run_experiment(cfg);
    if (!out_dir.empty()) critwave::write_run_artifacts(r, out_dir);
  }
  std::ostringstream trace;
  critwave::write_trace_csv(r.trace, trace);
  return py::make_tuple(r.summary.dump(), trace.str());
}

std::vector<py::dict> sweep(const std::string& config_json, const std::vector<double>& a_values,
                            const std::string& csv) {
  const auto cfg = critwave::config_from_json(json::parse(config_json));
  std::vector<critwave::SweepRow> rows;
  {
    py::gil_scoped_release release;
    rows = critwave::sweep(cfg, a_values, csv);
  }
  std::vector<py::dict> out;
  for (const auto& r : rows) {
    py::dict d;
    d["a"] = r.a;
    d["E_phi"] = r.E_phi;
    d["grad_ratio"] = r.grad_ratio;
    d["prediction"] = r.prediction;
    d["outcome"] = r.outcome;
    d["verdict"] = r.verdict;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<py::dict> verify(const std::vector<std::string>& only, double dt_scale, const std::string& artifact_dir) {
  critwave::AcceptanceOptions opts;
  opts.dt_scale = dt_scale;
  opts.artifact_dir = artifact_dir;
  std::vector<critwave::CriterionResult> results;
  {
    py::gil_scoped_release release;
    results = critwave::run_acceptance(opts, only);
  }
  std::vector<py::dict> out;
  for (const auto& r : results) {
    py::dict d;
    d["id"] = r.id;
    d["name"] = r.name;
    d["pass"] = r.pass;
    d["seconds"] = r.seconds;
    d["time_limit"] = r.time_limit;
    d["detail"] = r.detail;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of critwave";

  py::register_exception<nlohmann::json::exception>(m, "JsonError", PyExc_ValueError);

  m.def("constants", &constants, py::arg("d"));
  m.def("ground_state", py::overload_cast<int, double>(&critwave::ground_state), py::arg("d"), py::arg("r"));
  m.def("ground_state_rescaled", &critwave::rescaled_ground_state, py::arg("d"), py::arg("lam"), py::arg("r"));
  m.def("check_coefficient", &check_coefficient, py::arg("spec_json"), py::arg("d") = 3);
  m.def("run", &run, py::arg("config_json"), py::arg("out_dir") = std::string());
  m.def("sweep", &sweep, py::arg("config_json"), py::arg("a_values"), py::arg("csv"));
  m.def("criterion_names", &critwave::criterion_names);
  m.def("verify", &verify, py::arg("only") = std::vector<std::string>{}, py::arg("dt_scale") = 1.0,
        py::arg("artifact_dir") = std::string());
}

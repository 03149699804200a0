#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "critwave/acceptance.hpp"
#include "critwave/coefficients.hpp"
#include "critwave/experiment.hpp"
#include "critwave/ground_state.hpp"

using nlohmann::json;
using namespace critwave;

namespace {

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

std::filesystem::path resolve_out(const ExperimentConfig& c, const std::string& flag) {
  if (!flag.empty()) return flag;
  return output_directory(c);
}

int cmd_constants(int d) {
  if (d < 3 || d > 5) throw std::invalid_argument("--d must be 3, 4 or 5");
  json j;
  to_json(j, cached_ground_state_constants(d));
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_check_phi(const std::string& family, double param, int d) {
  json spec = {{"family", family}};
  if (family == "constant") spec["c"] = param;
  else if (family == "sinh_power") spec["sigma"] = param;
  else if (family == "gaussian") spec["alpha"] = param;
  else throw std::invalid_argument("--family must be constant, sinh_power or gaussian");
  const auto coeff = coefficient_from_json(spec);
  const auto grid = condition_scan_grid(d);
  json reports = json::array();
  for (const auto& r : {check_defocusing_condition(coeff, grid), check_focusing_condition(coeff, grid),
                        check_decay_condition(coeff, grid)}) {
    json jr;
    to_json(jr, r);
    reports.push_back(jr);
  }
  json cj;
  to_json(cj, coeff);
  std::cout << json{{"schema", 1}, {"coefficient", cj}, {"reports", reports}}.dump(2) << '\n';
  return 0;
}

int run_single(const ExperimentConfig& c, const std::string& out_flag) {
  const auto dir = resolve_out(c, out_flag);
  const auto r = run_experiment(c);
  write_run_artifacts(r, dir);
  std::cout << json{{"output", dir.string()},
                    {"prediction", r.summary.at("prediction").at("verdict")},
                    {"outcome", r.summary.at("outcome").at("kind")},
                    {"verdict", r.summary.at("verdict")}}
                   .dump(2)
            << '\n';
  return 0;
}

int run_sweep(const ExperimentConfig& c, const std::vector<double>& a, const std::string& out_flag,
              const std::string& csv_name) {
  const auto dir = resolve_out(c, out_flag);
  const auto rows = sweep(c, a, dir / csv_name);
  int failed = 0;
  for (const auto& r : rows) failed += r.verdict == "Failed";
  std::cout << sweep_csv(rows);
  return failed ? 1 : 0;
}

ExperimentConfig hyperbolic_config(const std::string& path) {
  json j = path.empty() ? json::object() : load_json(path);
  if (!j.contains("data")) j["data"] = {{"family", "h3_family"}};
  if (j["data"].value("family", std::string()) != "h3_family")
    throw std::invalid_argument("hyperbolic runs take data.family = \"h3_family\"");
  if (!j.contains("dimension")) j["dimension"] = 3;
  return config_from_json(j);
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial solver and diagnostics for energy-critical focusing and defocusing wave equations"};
  app.require_subcommand(1);

  int dim = 3;
  auto* constants = app.add_subcommand("constants", "Ground-state constants as JSON");
  constants->add_option("--d", dim, "Dimension (3, 4 or 5)")->required();

  std::string family;
  double param = 0.0;
  int phi_dim = 3;
  auto* check_phi = app.add_subcommand("check-phi", "Certify the coefficient conditions");
  check_phi->add_option("--family", family, "constant, sinh_power or gaussian")->required();
  check_phi->add_option("--sigma,--alpha,--c", param, "Family parameter")->required();
  check_phi->add_option("--d", phi_dim, "Dimension");

  std::string config_path, out_dir;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run one configuration");
  evolve_cmd->add_option("--config", config_path, "JSON configuration")->required();
  evolve_cmd->add_option("--out", out_dir, "Output directory");

  std::vector<double> a_values;
  std::string csv_name = "sweep.csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the data scale");
  sweep_cmd->add_option("--config", config_path, "JSON configuration")->required();
  sweep_cmd->add_option("--a", a_values, "Scale values, monotone")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_option("--csv", csv_name, "CSV file name inside the output directory");

  auto* hyper_cmd = app.add_subcommand("hyperbolic", "Run or sweep hyperbolic-space data through the transform");
  hyper_cmd->add_option("--config", config_path, "JSON configuration");
  hyper_cmd->add_option("--a", a_values, "Amplitudes to sweep")->delimiter(',');
  hyper_cmd->add_option("--out", out_dir, "Output directory");
  hyper_cmd->add_option("--csv", csv_name, "CSV file name inside the output directory");

  std::vector<std::string> only;
  double dt_scale = 1.0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--only", only, "Criteria to run")->delimiter(',');
  verify_cmd->add_option("--out", out_dir, "Directory for artifact CSVs");
  verify_cmd->add_option("--dt-scale", dt_scale, "Multiply the conservation-run time step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*constants) return cmd_constants(dim);
    if (*check_phi) return cmd_check_phi(family, param, phi_dim);
    if (*evolve_cmd) return run_single(config_from_json(load_json(config_path)), out_dir);
    if (*sweep_cmd) return run_sweep(config_from_json(load_json(config_path)), a_values, out_dir, csv_name);
    if (*hyper_cmd) {
      const auto c = hyperbolic_config(config_path);
      return a_values.empty() ? run_single(c, out_dir) : run_sweep(c, a_values, out_dir, csv_name);
    }
    if (*verify_cmd) {
      AcceptanceOptions opt;
      opt.dt_scale = dt_scale;
      if (!out_dir.empty()) opt.artifact_dir = out_dir;
      else if (const char* env = std::getenv("CRITWAVE_OUT"); env && *env) opt.artifact_dir = env;
      bool all = true;
      for (const auto& n : only) {
        if (std::find(criterion_names().begin(), criterion_names().end(), n) == criterion_names().end())
          throw std::invalid_argument("unknown criterion '" + n + "'");
      }
      std::vector<std::string> names = only.empty() ? criterion_names() : only;
      for (const auto& n : criterion_names()) {
        if (std::find(names.begin(), names.end(), n) == names.end()) continue;
        const auto r = run_criterion(n, opt);
        std::cout << format_result(r) << std::endl;
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    print_error("invalid_argument", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 3;
  }
  return 0;
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "critwave/experiment.hpp"

using namespace critwave;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("critwave_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json small_config() {
  return {{"dimension", 3},
          {"grid", {{"r_max", "auto"}, {"n", 512}}},
          {"coefficient", {{"family", "sinh_power"}, {"sigma", 2}}},
          {"zeta", 1},
          {"data", {{"family", "gaussian_bump"}, {"amplitude", 0.3}, {"center", 0.0}, {"width", 1.0}}},
          {"solver", {{"cfl", 0.5}, {"t_final", 4.0}}}};
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = config_from_json(small_config());
  CHECK(c.cells == 512);
  CHECK(c.auto_radius);
  CHECK(c.coefficient == CoefficientSpec::sinh_power(2.0));
  CHECK(c.solver.coefficient == c.coefficient);
  const auto grid = run_grid(c);
  CHECK(grid.r_max() - 2.0 * grid.dr() == doctest::Approx(6.0 + 4.0));

  auto j = small_config();
  j["dimension"] = 7;
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  j = small_config();
  j["solver"]["cfl"] = 3.0;
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  j = small_config();
  j["colour"] = "red";
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  j = small_config();
  j["data"] = {{"family", "scaled_ground_state"}, {"a", 1.0}};
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);  // untruncated W on an auto grid
  j = small_config();
  j["data"] = {{"family", "h3_family"}, {"amplitude", 1.0}};
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);  // needs sinh_power(4)
  j.erase("coefficient");
  CHECK(config_from_json(j).coefficient == CoefficientSpec::sinh_power(4.0));

  const auto round = config_from_json(config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("run writes deterministic artifacts") {
  auto c = config_from_json(small_config());
  const auto dir1 = scratch("run1"), dir2 = scratch("run2");
  write_run_artifacts(run_experiment(c), dir1);
  write_run_artifacts(run_experiment(c), dir2);
  CHECK(slurp(dir1 / "trace.csv") == slurp(dir2 / "trace.csv"));
  CHECK_FALSE(slurp(dir1 / "trace.csv").empty());

  const auto summary = json::parse(slurp(dir1 / "summary.json"));
  CHECK(summary.at("schema") == 1);
  CHECK(summary.at("grid").contains("cfl"));
  CHECK(summary.at("grid").contains("dt"));
  CHECK(summary.at("truncation").contains("ground_state_truncation_bound"));
  CHECK(summary.at("outcome").at("dispersion_proxy_is_heuristic") == true);
  CHECK(summary.at("prediction").at("verdict") == "Scatter");
  const auto cond = json::parse(slurp(dir1 / "conditions.json"));
  CHECK(cond.at("reports").size() == 3);
  CHECK_FALSE(std::filesystem::exists(dir1 / "trace.csv.tmp"));
}

TEST_CASE("output directory override") {
  ExperimentConfig c;
  c.output_dir = "somewhere";
  ::unsetenv("CRITWAVE_OUT");
  CHECK(output_directory(c) == "somewhere");
  ::setenv("CRITWAVE_OUT", "/tmp/elsewhere", 1);
  CHECK(output_directory(c) == "/tmp/elsewhere");
  ::unsetenv("CRITWAVE_OUT");
}

TEST_CASE("sweep is resumable and rejects bad input") {
  auto c = config_from_json(small_config());
  c.refine = false;
  const auto dir = scratch("sweep");
  const auto csv = dir / "sweep.csv";
  CHECK_THROWS_AS(sweep(c, std::vector<double>{}, csv), std::invalid_argument);
  CHECK_THROWS_AS(sweep(c, std::vector<double>{0.2, 0.1, 0.3}, csv), std::invalid_argument);

  const std::vector<double> first = {0.1, 0.2};
  const auto rows = sweep(c, first, csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].prediction == "Scatter");
  CHECK(read_sweep_csv(csv).size() == 2);

  // A marker in the stored row survives the second call, so it was not recomputed.
  auto stored = read_sweep_csv(csv);
  stored[0].outcome = "Marker";
  write_atomic(csv, sweep_csv(stored));
  const std::vector<double> more = {0.1, 0.2, 0.3};
  const auto resumed = sweep(c, more, csv);
  REQUIRE(resumed.size() == 3);
  CHECK(resumed[0].outcome == "Marker");
  CHECK(read_sweep_csv(csv).size() == 3);
}

TEST_CASE("a failing row is marked and the sweep continues") {
  auto c = config_from_json(small_config());
  c.refine = false;
  const auto csv = scratch("failing") / "sweep.csv";
  const SweepRunner flaky = [](const ExperimentConfig& rc) {
    if (rc.data.amplitude > 0.15 && rc.data.amplitude < 0.25) throw std::runtime_error("boom");
    return run_experiment(rc);
  };
  const std::vector<double> a = {0.1, 0.2, 0.3};
  const auto rows = sweep(c, a, csv, flaky);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].verdict != "Failed");
  CHECK(rows[1].verdict == "Failed");
  CHECK(rows[2].verdict != "Failed");
  CHECK(read_sweep_csv(csv).size() == 3);
}

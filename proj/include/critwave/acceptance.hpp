#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace critwave {

struct AcceptanceOptions {
  /// Multiplies the time step of the energy-conservation runs.
  double dt_scale = 1.0;
  /// Where decay_fit.csv and threshold_sweep.csv go; empty skips them.
  std::filesystem::path artifact_dir;
};

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  double seconds;
  double time_limit;
  std::string detail;
};

/// Names in order: constants, stationarity, linear_exactness, free_decay,
/// energy_conservation, morawetz, virial, threshold, constant_coefficient,
/// hyperbolic, conditions.
const std::vector<std::string>& criterion_names();

/// Runs one criterion; a criterion that throws is reported as failed.
/// Exceeding the time limit fails the criterion.
CriterionResult run_criterion(const std::string& name, const AcceptanceOptions& options = {});

/// All criteria, or only those in `only` when it is non-empty.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::vector<std::string>& only = {});

/// "PASS  4 free_decay  (12.3 s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace critwave

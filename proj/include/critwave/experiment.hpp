#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "critwave/classifier.hpp"
#include "critwave/evolution.hpp"

namespace critwave {

enum class DataFamily { scaled_ground_state, gaussian_bump, h3_family };

struct DataSpec {
  DataFamily family = DataFamily::scaled_ground_state;
  double a = 1.0;
  double lambda = 1.0;
  double truncation = 0.0;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;

  /// Multiplier swept by `sweep`: a for scaled_ground_state, amplitude otherwise.
  double scale() const;
  DataSpec with_scale(double s) const;
  double support() const;
};

struct ExperimentConfig {
  int dim = 3;
  bool auto_radius = true;
  double r_max = 0.0;
  int cells = 4096;
  CoefficientSpec coefficient = CoefficientSpec::constant(1.0);
  int zeta = 1;
  DataSpec data;
  SolverConfig solver;
  /// Run at n and 2n and require agreement before reporting BlewUp.
  bool refine = true;
  /// Trapping-check delta; 0 picks one from the energy gap.
  double delta = 0.0;
  std::string output_dir = "critwave_out";
};

/// Parses and validates; throws std::invalid_argument naming the bad field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// CRITWAVE_OUT if set, else the configured directory.
std::filesystem::path output_directory(const ExperimentConfig& c);

RadialGrid run_grid(const ExperimentConfig& c);
WaveState build_data(const ExperimentConfig& c, const RadialGrid& grid);
Prediction predict(const ExperimentConfig& c, const WaveState& data);

struct RunResult {
  RunTrace trace;
  Outcome outcome;
  Prediction prediction;
  Comparison comparison;
  nlohmann::json summary;
  nlohmann::json conditions;
};

RunResult run_experiment(const ExperimentConfig& c);

/// trace.csv, summary.json and conditions.json, each written atomically.
void write_run_artifacts(const RunResult& r, const std::filesystem::path& dir);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct SweepRow {
  double a;
  double E_phi;
  double grad_ratio;
  std::string prediction;
  std::string outcome;
  std::string verdict;
};

extern const char* const kSweepColumns[6];

/// One run per value of the data scale. Rows already present in `csv` are
/// kept and skipped; the file is rewritten after every finished row. A run
/// that throws is recorded with verdict Failed. `runner` defaults to
/// run_experiment.
using SweepRunner = std::function<RunResult(const ExperimentConfig&)>;
std::vector<SweepRow> sweep(const ExperimentConfig& c, std::span<const double> a_values,
                            const std::filesystem::path& csv, const SweepRunner& runner = {});

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& csv);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace critwave

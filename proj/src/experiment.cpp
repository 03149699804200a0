#include "critwave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "critwave/data.hpp"
#include "critwave/functionals.hpp"
#include "critwave/hyperbolic.hpp"

namespace critwave {

using nlohmann::json;

namespace {

std::string family_name(DataFamily f) {
  switch (f) {
    case DataFamily::scaled_ground_state: return "scaled_ground_state";
    case DataFamily::gaussian_bump: return "gaussian_bump";
    case DataFamily::h3_family: return "h3_family";
  }
  return "scaled_ground_state";
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end())
      throw std::invalid_argument("unknown field '" + key + "' in " + where);
  }
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw std::invalid_argument(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

DataSpec data_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("data must be an object");
  DataSpec d;
  const auto family = j.value("family", std::string("scaled_ground_state"));
  if (family == "scaled_ground_state") {
    reject_unknown(j, {"family", "a", "lambda", "truncation"}, "data");
    d.family = DataFamily::scaled_ground_state;
    d.a = number(j, "a", 1.0, "data");
    d.lambda = number(j, "lambda", 1.0, "data");
    d.truncation = number(j, "truncation", 0.0, "data");
    if (!(d.lambda > 0.0)) throw std::invalid_argument("data.lambda must be positive");
    if (d.truncation < 0.0) throw std::invalid_argument("data.truncation must be nonnegative");
  } else if (family == "gaussian_bump") {
    reject_unknown(j, {"family", "amplitude", "center", "width"}, "data");
    d.family = DataFamily::gaussian_bump;
    d.amplitude = number(j, "amplitude", 1.0, "data");
    d.center = number(j, "center", 0.0, "data");
    d.width = number(j, "width", 1.0, "data");
    if (!(d.width > 0.0) || d.center < 0.0) throw std::invalid_argument("data.width/center out of range");
  } else if (family == "h3_family") {
    reject_unknown(j, {"family", "amplitude", "width"}, "data");
    d.family = DataFamily::h3_family;
    d.amplitude = number(j, "amplitude", 1.0, "data");
    d.width = number(j, "width", 1.0, "data");
    if (!(d.width > 0.0)) throw std::invalid_argument("data.width must be positive");
  } else {
    throw std::invalid_argument("unknown data family '" + family + "'");
  }
  return d;
}

json data_to_json(const DataSpec& d) {
  switch (d.family) {
    case DataFamily::scaled_ground_state:
      return {{"family", family_name(d.family)}, {"a", d.a}, {"lambda", d.lambda}, {"truncation", d.truncation}};
    case DataFamily::gaussian_bump:
      return {{"family", family_name(d.family)}, {"amplitude", d.amplitude}, {"center", d.center}, {"width", d.width}};
    case DataFamily::h3_family:
      return {{"family", family_name(d.family)}, {"amplitude", d.amplitude}, {"width", d.width}};
  }
  return {};
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

json outcome_json(const Outcome& o) {
  return {{"kind", to_string(o.kind)},
          {"t_event", o.t_event},
          {"final_potential_fraction", std::isfinite(o.final_potential_fraction) ? json(o.final_potential_fraction)
                                                                                  : json("inf")},
          {"sup_tail_monotone", o.sup_tail_monotone},
          {"refinement_consistent", o.refinement_consistent},
          {"nan_detected", o.nan_detected},
          {"dispersion_proxy_is_heuristic", true},
          {"note", o.note}};
}

}  // namespace

double DataSpec::scale() const { return family == DataFamily::scaled_ground_state ? a : amplitude; }

DataSpec DataSpec::with_scale(double s) const {
  DataSpec d = *this;
  (family == DataFamily::scaled_ground_state ? d.a : d.amplitude) = s;
  return d;
}

double DataSpec::support() const {
  switch (family) {
    case DataFamily::scaled_ground_state: return scaled_ground_state_support(truncation);
    case DataFamily::gaussian_bump: return gaussian_bump_support(center, width);
    case DataFamily::h3_family: return 6.0 * width;
  }
  return 0.0;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(j, {"dimension", "grid", "coefficient", "zeta", "data", "solver", "diagnostics", "output"}, "config");
  ExperimentConfig c;
  if (j.contains("dimension")) {
    if (!j.at("dimension").is_number_integer()) throw std::invalid_argument("dimension must be an integer");
    c.dim = j.at("dimension").get<int>();
  }
  if (c.dim < 3 || c.dim > 5) throw std::invalid_argument("dimension must be 3, 4 or 5");

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"r_max", "n"}, "grid");
    if (g.contains("n")) {
      if (!g.at("n").is_number_integer()) throw std::invalid_argument("grid.n must be an integer");
      c.cells = g.at("n").get<int>();
    }
    if (g.contains("r_max")) {
      const auto& r = g.at("r_max");
      if (r.is_string()) {
        if (r.get<std::string>() != "auto") throw std::invalid_argument("grid.r_max must be a number or \"auto\"");
        c.auto_radius = true;
      } else if (r.is_number()) {
        c.auto_radius = false;
        c.r_max = r.get<double>();
        if (!(c.r_max > 0.0)) throw std::invalid_argument("grid.r_max must be positive");
      } else {
        throw std::invalid_argument("grid.r_max must be a number or \"auto\"");
      }
    }
  }
  if (c.cells < 16) throw std::invalid_argument("grid.n must be at least 16");

  if (j.contains("data")) c.data = data_from_json(j.at("data"));
  if (j.contains("coefficient")) {
    c.coefficient = coefficient_from_json(j.at("coefficient"));
  } else if (c.data.family == DataFamily::h3_family) {
    c.coefficient = h3_coefficient();
  }
  if (j.contains("zeta")) {
    if (!j.at("zeta").is_number_integer()) throw std::invalid_argument("zeta must be +1 or -1");
    c.zeta = j.at("zeta").get<int>();
  }
  if (c.zeta != 1 && c.zeta != -1) throw std::invalid_argument("zeta must be +1 or -1");
  if (c.data.family == DataFamily::h3_family) {
    if (c.dim != 3) throw std::invalid_argument("h3_family data requires dimension 3");
    if (!(c.coefficient == h3_coefficient()) || c.zeta != 1)
      throw std::invalid_argument("h3_family data requires the sinh_power(4) coefficient and zeta = +1");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s, {"cfl", "t_final", "sup_cap", "h_cap", "refine", "linear"}, "solver");
    c.solver.cfl = number(s, "cfl", c.solver.cfl, "solver");
    c.solver.t_final = number(s, "t_final", c.solver.t_final, "solver");
    c.solver.blowup_sup_cap = number(s, "sup_cap", c.solver.blowup_sup_cap, "solver");
    c.solver.blowup_h_cap = number(s, "h_cap", c.solver.blowup_h_cap, "solver");
    if (s.contains("refine")) c.refine = s.at("refine").get<bool>();
    if (s.contains("linear")) c.solver.linear = s.at("linear").get<bool>();
  }
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    reject_unknown(d, {"cadence", "R", "delta"}, "diagnostics");
    if (d.contains("cadence")) c.solver.cadence = d.at("cadence").get<int>();
    c.solver.cutoff_radius = number(d, "R", 0.0, "diagnostics");
    c.delta = number(d, "delta", 0.0, "diagnostics");
    if (c.delta < 0.0 || c.delta >= 1.0) throw std::invalid_argument("diagnostics.delta must lie in [0, 1)");
  }
  if (j.contains("output")) c.output_dir = j.at("output").get<std::string>();
  c.solver.coefficient = c.coefficient;
  c.solver.zeta = c.zeta;

  if (c.auto_radius && !std::isfinite(c.data.support()))
    throw std::invalid_argument("\"auto\" grid needs compactly supported data (set data.truncation)");
  // Surface solver errors before any run.
  c.solver.validate(run_grid(c));
  if (c.refine) c.solver.validate(run_grid(c).refined());
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json coeff;
  to_json(coeff, c.coefficient);
  return {{"dimension", c.dim},
          {"grid", {{"r_max", c.auto_radius ? json("auto") : json(c.r_max)}, {"n", c.cells}}},
          {"coefficient", coeff},
          {"zeta", c.zeta},
          {"data", data_to_json(c.data)},
          {"solver",
           {{"cfl", c.solver.cfl},
            {"t_final", c.solver.t_final},
            {"sup_cap", c.solver.blowup_sup_cap},
            {"h_cap", c.solver.blowup_h_cap},
            {"refine", c.refine},
            {"linear", c.solver.linear}}},
          {"diagnostics", {{"cadence", c.solver.cadence}, {"R", c.solver.cutoff_radius}, {"delta", c.delta}}},
          {"output", c.output_dir}};
}

std::filesystem::path output_directory(const ExperimentConfig& c) {
  if (const char* env = std::getenv("CRITWAVE_OUT"); env && *env) return env;
  return c.output_dir;
}

RadialGrid run_grid(const ExperimentConfig& c) {
  if (!c.auto_radius) return RadialGrid(c.dim, c.r_max, c.cells);
  const double n = c.cells;
  // r_max - 2 dr = support + t_final with dr = r_max / n.
  const double r_max = (c.data.support() + c.solver.t_final) * n / (n - 2.0);
  return RadialGrid(c.dim, r_max, c.cells);
}

WaveState build_data(const ExperimentConfig& c, const RadialGrid& grid) {
  const auto& d = c.data;
  switch (d.family) {
    case DataFamily::scaled_ground_state: return scaled_ground_state(grid, d.a, d.lambda, d.truncation);
    case DataFamily::gaussian_bump: return gaussian_bump(grid, d.amplitude, d.center, d.width);
    case DataFamily::h3_family: {
      const auto [v0, v1] = h3_family(grid, d.amplitude, d.width);
      return WaveState(T_forward(v0), T_forward(v1));
    }
  }
  throw std::invalid_argument("unknown data family");
}

Prediction predict(const ExperimentConfig& c, const WaveState& data) {
  const auto& ground = cached_ground_state_constants(c.dim);
  if (c.zeta == -1) return predict_defocusing(data, c.coefficient);
  if (c.data.family == DataFamily::h3_family) {
    auto p = predict_focusing(data, c.coefficient, ground);
    p.theorem = TheoremId::hyperbolic_threshold;
    return p;
  }
  if (c.coefficient.family() == CoefficientFamily::constant)
    return predict_constant_c(data, c.coefficient.parameter(), ground);
  return predict_focusing(data, c.coefficient, ground);
}

RunResult run_experiment(const ExperimentConfig& c) {
  const auto grid = run_grid(c);
  const auto data = build_data(c, grid);
  RunResult r;
  r.prediction = predict(c, data);
  if (c.refine) {
    auto refined = evolve_refined([&c](const RadialGrid& g) { return build_data(c, g); }, grid, c.solver);
    r.trace = std::move(refined.coarse);
    r.outcome = refined.outcome;
  } else {
    r.trace = evolve(data, c.solver);
    r.outcome = r.trace.outcome;
    if (r.outcome.kind == OutcomeKind::BlewUp) {
      r.outcome.kind = OutcomeKind::Undecided;
      r.outcome.note = "cap hit at a single resolution";
    }
  }
  r.comparison = compare(r.prediction, r.outcome);

  const auto& ground = cached_ground_state_constants(c.dim);
  const auto e = energy(data, c.coefficient, c.zeta);
  json prediction;
  to_json(prediction, r.prediction);
  json constants;
  to_json(constants, ground);
  r.summary = {{"schema", 1},
               {"config", config_to_json(c)},
               {"grid",
                {{"dimension", grid.dim()},
                 {"r_max", grid.r_max()},
                 {"cells", grid.cells()},
                 {"dr", grid.dr()},
                 {"cfl", r.trace.cfl},
                 {"dt", r.trace.dt},
                 {"domain_sufficient", r.trace.domain_sufficient}}},
               {"energies",
                {{"total", e.total},
                 {"kinetic", e.kinetic},
                 {"gradient", e.gradient},
                 {"potential", e.potential},
                 {"scheme_energy", scheme_energy(data, c.coefficient, c.zeta)}}},
               {"truncation",
                {{"data_gradient_tail_bound", harmonic_gradient_tail(data.u)},
                 {"ground_state_truncation_bound", ground.truncation_error_bound},
                 {"ground_state_quadrature_error", ground.quadrature_error}}},
               {"ground_state", constants},
               {"prediction", prediction},
               {"outcome", outcome_json(r.outcome)},
               {"verdict", to_string(r.comparison.agreement)},
               {"verdict_detail", r.comparison.detail}};
  if (c.zeta == 1 && r.prediction.energy_gap > 0.0) {
    const double delta = c.delta > 0.0 ? c.delta : admissible_delta(e.total, ground.energy_E1);
    if (delta > 0.0) {
      const auto t = trapping_check(data, c.coefficient, delta, ground);
      r.summary["trapping"] = {{"delta", t.delta},
                               {"hypotheses_hold", t.hypotheses_hold},
                               {"h_norm", t.h_norm},
                               {"h_bound", t.h_bound},
                               {"h_bound_holds", t.h_bound_holds},
                               {"lower_constant", t.lower_constant},
                               {"ratio_gradient", t.ratio_gradient},
                               {"ratio_energy", t.ratio_energy},
                               {"gradient_ratio_holds", t.gradient_ratio_holds},
                               {"energy_ratio_holds", t.energy_ratio_holds}};
    }
  }
  if (c.zeta == -1 && !r.trace.rows.empty()) {
    r.summary["morawetz"] = {{"lhs", r.trace.rows.back().morawetz_accum},
                             {"bound", 2.0 * c.dim / (c.dim - 1.0) * r.trace.initial_energy}};
  }

  const auto scan = condition_scan_grid(c.dim);
  json reports = json::array();
  for (const auto& rep : {check_defocusing_condition(c.coefficient, scan), check_focusing_condition(c.coefficient, scan),
                          check_decay_condition(c.coefficient, scan)}) {
    json jr;
    to_json(jr, rep);
    reports.push_back(jr);
  }
  json coeff;
  to_json(coeff, c.coefficient);
  r.conditions = {{"schema", 1}, {"coefficient", coeff}, {"reports", reports}};
  return r;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << contents;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_run_artifacts(const RunResult& r, const std::filesystem::path& dir) {
  std::ostringstream trace;
  write_trace_csv(r.trace, trace);
  write_atomic(dir / "trace.csv", trace.str());
  write_atomic(dir / "summary.json", r.summary.dump(2) + "\n");
  write_atomic(dir / "conditions.json", r.conditions.dump(2) + "\n");
}

const char* const kSweepColumns[6] = {"a", "E_phi", "grad_ratio", "prediction", "outcome", "verdict"};

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << kSweepColumns[i];
  os << '\n';
  for (const auto& r : rows) {
    os << format_number(r.a) << ',' << format_number(r.E_phi) << ',' << format_number(r.grad_ratio) << ','
       << r.prediction << ',' << r.outcome << ',' << r.verdict << '\n';
  }
  return os.str();
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& csv) {
  std::vector<SweepRow> rows;
  std::ifstream is(csv);
  if (!is) return rows;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw std::runtime_error("malformed sweep row in " + csv.string());
    auto num = [](const std::string& s) { return s == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s); };
    rows.push_back({num(cells[0]), num(cells[1]), num(cells[2]), cells[3], cells[4], cells[5]});
  }
  return rows;
}

std::vector<SweepRow> sweep(const ExperimentConfig& c, std::span<const double> a_values,
                            const std::filesystem::path& csv, const SweepRunner& runner) {
  if (a_values.empty()) throw std::invalid_argument("empty a_values");
  const bool up = a_values.size() < 2 || a_values[1] > a_values[0];
  for (std::size_t k = 1; k < a_values.size(); ++k) {
    if (up ? !(a_values[k] > a_values[k - 1]) : !(a_values[k] < a_values[k - 1]))
      throw std::invalid_argument("a_values must be strictly monotone");
  }

  auto rows = read_sweep_csv(csv);
  auto done = [&rows](double a) {
    return std::any_of(rows.begin(), rows.end(),
                       [a](const SweepRow& r) { return std::abs(r.a - a) <= 1e-12 * std::max(1.0, std::abs(a)); });
  };
  std::vector<double> pending;
  for (double a : a_values)
    if (!done(a)) pending.push_back(a);

  auto run_row = [&c, &runner](double a) {
    ExperimentConfig rc = c;
    rc.data = c.data.with_scale(a);
    SweepRow row{a, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), "", "", ""};
    try {
      const auto grid = run_grid(rc);
      const auto data = build_data(rc, grid);
      const auto e = energy(data, rc.coefficient, rc.zeta);
      row.E_phi = e.total;
      row.grad_ratio = std::sqrt(2.0 * e.gradient) / cached_ground_state_constants(rc.dim).grad_norm();
      const auto result = runner ? runner(rc) : run_experiment(rc);
      row.prediction = to_string(result.prediction.verdict);
      row.outcome = to_string(result.outcome.kind);
      row.verdict = to_string(result.comparison.agreement);
    } catch (const std::exception&) {
      row.verdict = "Failed";
    }
    return row;
  };

  auto flush = [&] {
    std::sort(rows.begin(), rows.end(), [up](const SweepRow& x, const SweepRow& y) { return up ? x.a < y.a : x.a > y.a; });
    write_atomic(csv, sweep_csv(rows));
  };

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < pending.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = start; k < std::min(pending.size(), start + workers); ++k)
      batch.push_back(std::async(std::launch::async, run_row, pending[k]));
    for (auto& f : batch) {
      rows.push_back(f.get());
      flush();
    }
  }
  if (pending.empty()) flush();

  std::vector<SweepRow> out;
  for (double a : a_values)
    for (const auto& r : rows)
      if (std::abs(r.a - a) <= 1e-12 * std::max(1.0, std::abs(a))) out.push_back(r);
  return out;
}

}  // namespace critwave

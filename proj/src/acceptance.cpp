#include "critwave/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "critwave/classifier.hpp"
#include "critwave/data.hpp"
#include "critwave/evolution.hpp"
#include "critwave/experiment.hpp"
#include "critwave/functionals.hpp"
#include "critwave/ground_state.hpp"
#include "critwave/hyperbolic.hpp"

namespace critwave {

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] " << what << "; ";
    }
  }
  template <class T>
  void note(const std::string& key, T value) {
    detail << key << '=' << value << "; ";
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double sup_abs(const RadialField& f) {
  double s = 0.0;
  for (double v : f.values) s = std::max(s, std::abs(v));
  return s;
}

// Closed-form ||W||_{L^{2*}}^{2*} = |S^{d-1}| (d(d-2))^{d/2} B(d/2, d/2) / 2.
double beta_oracle_grad_sq(int d) {
  const double area = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
  return area * std::pow(d * (d - 2.0), d / 2.0) * 0.5 * std::beta(d / 2.0, d / 2.0);
}

double talenti_constant(int d) {
  return std::sqrt(1.0 / (std::numbers::pi * d * (d - 2.0))) * std::pow(std::tgamma(d) / std::tgamma(d / 2.0), 1.0 / d);
}

void constants(Check& c, const AcceptanceOptions&) {
  for (int d : {3, 4, 5}) {
    const auto& g = cached_ground_state_constants(d);
    const double grad = g.grad_norm_sq;
    c.require(rel(g.l2star_pow, grad) <= 1e-6, "grad = L^{2*} power, d=" + std::to_string(d));
    c.require(rel(g.energy_E1, grad / d) <= 1e-6, "E1 = grad/d, d=" + std::to_string(d));
    const double ratio = std::pow(g.l2star_pow, 1.0 / sobolev_exponent(d)) / std::sqrt(grad);
    c.require(rel(g.sobolev_C, ratio) <= 1e-6, "Sobolev ratio, d=" + std::to_string(d));
    c.require(rel(g.sobolev_C, talenti_constant(d)) <= 1e-6, "sharp constant closed form, d=" + std::to_string(d));
    c.require(rel(grad, beta_oracle_grad_sq(d)) <= 1e-6, "closed-form norm, d=" + std::to_string(d));
  }
  const double d3 = cached_ground_state_constants(3).grad_norm_sq;
  const double oracle = 3.0 * std::sqrt(3.0) * std::numbers::pi * std::numbers::pi / 4.0;
  c.note("grad_sq_d3", d3);
  c.note("rel_err_d3", rel(d3, oracle));
  c.require(rel(d3, oracle) <= 1e-6, "d=3 value against 3 sqrt(3) pi^2 / 4");
}

void stationarity(Check& c, const AcceptanceOptions&) {
  for (int d : {3, 4, 5}) {
    const double coarse = stationarity_residual(RadialGrid(d, 20.0, 1024)).sup;
    const double fine = stationarity_residual(RadialGrid(d, 20.0, 4096)).sup;
    const double order = std::log(coarse / fine) / std::log(4.0);
    c.note("order_d" + std::to_string(d), order);
    c.require(order >= 1.9, "observed order >= 1.9, d=" + std::to_string(d));
  }
}

void linear_exactness(Check& c, const AcceptanceOptions&) {
  const double t = 3.0;
  const RadialGrid grid(3, 12.0, 1200);
  const auto f = [](double s) { return s <= 6.0 ? std::exp(-s * s) : 0.0; };
  const auto df = [](double s) { return s <= 6.0 ? -2.0 * s * std::exp(-s * s) : 0.0; };
  const auto data = gaussian_bump(grid, 1.0, 0.0, 1.0);
  const auto out = evolve_linear(data, t, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    // r u = ((r + t) f(r + t) + (r - t) f(|r - t|)) / 2, u(0) = f(t) + t f'(t).
    const double exact =
        i == 0 ? f(t) + t * df(t) : 0.5 * ((r + t) * f(r + t) + (r - t) * f(std::abs(r - t))) / r;
    err = std::max(err, std::abs(out.u[i] - exact));
  }
  c.note("sup_error", err);
  c.require(err <= 1e-12, "sup error <= 1e-12");
}

void free_decay(Check& c, const AcceptanceOptions& o) {
  const RadialGrid grid(3, 110.0, 11000);
  std::vector<double> ts;
  for (int k = 10; k <= 100; k += 5) ts.push_back(k);
  const auto fit = free_decay_test(gaussian_bump(grid, 1.0, 0.0, 1.0), ts, 1.0);
  c.note("slope_L6", fit.slope_l2star);
  c.note("slope_sup", fit.slope_sup);
  c.require(std::abs(fit.slope_l2star + 0.5) <= 0.05, "L6 slope within -0.5 +- 0.05");
  c.require(fit.slope_sup <= -0.9, "sup slope <= -0.9");
  if (!o.artifact_dir.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "t,l2star,sup\n";
    for (std::size_t k = 0; k < fit.t.size(); ++k) os << fit.t[k] << ',' << fit.l2star[k] << ',' << fit.sup[k] << '\n';
    write_atomic(o.artifact_dir / "decay_fit.csv", os.str());
  }
}

double conservation_drift(double cfl) {
  const int n = 4096;
  const double truncation = 8.0, t_final = 10.0;
  const RadialGrid grid(3, (2.0 * truncation + t_final) * n / (n - 2.0), n);
  const auto data = scaled_ground_state(grid, 0.5, 1.0, truncation);
  SolverConfig cfg;
  cfg.cfl = cfl;
  cfg.t_final = t_final;
  cfg.coefficient = CoefficientSpec::sinh_power(2.0);
  const double e0 = scheme_energy(data, cfg.coefficient, 1);
  double drift = 0.0;
  const DiagnosticHook hook = [&](const WaveState& s) {
    drift = std::max(drift, std::abs(scheme_energy(s, cfg.coefficient, 1) - e0) / std::abs(e0));
  };
  evolve(data, cfg, std::span<const DiagnosticHook>(&hook, 1));
  return drift;
}

void energy_conservation(Check& c, const AcceptanceOptions& o) {
  const double coarse = conservation_drift(0.5 * o.dt_scale);
  const double fine = conservation_drift(0.25 * o.dt_scale);
  c.note("drift", coarse);
  c.note("drift_half_dt", fine);
  c.note("improvement", coarse / fine);
  c.require(coarse <= 1e-4, "relative drift <= 1e-4");
  c.require(coarse / fine >= 3.5, "drift improves >= 3.5x when dt halves");
}

void morawetz(Check& c, const AcceptanceOptions&) {
  const int n = 4096;
  const double t_final = 20.0;
  const RadialGrid grid(3, (gaussian_bump_support(0.0, 1.0) + t_final) * n / (n - 2.0), n);
  SolverConfig cfg;
  cfg.t_final = t_final;
  cfg.zeta = -1;
  cfg.coefficient = CoefficientSpec::gaussian(1.0);
  const auto trace = evolve(gaussian_bump(grid, 1.0, 0.0, 1.0), cfg);
  const auto m = morawetz_accumulate(trace);
  c.note("lhs", m.lhs);
  c.note("bound", m.bound);
  c.note("energy", trace.initial_energy);
  c.require(m.margin() > 0.0, "accumulated left side below 3 E with positive margin");
}

void virial(Check& c, const AcceptanceOptions&) {
  const double truncation = 8.0, t_final = 10.0;
  const double R = 2.0 * truncation + t_final;
  const RadialGrid grid(3, 2.0 * R, 4096);
  const auto phi = CoefficientSpec::sinh_power(2.0);
  SolverConfig cfg;
  cfg.t_final = t_final;
  cfg.coefficient = phi;
  cfg.cadence = 1;
  cfg.cutoff_radius = R;
  std::vector<WaveState> states;
  const DiagnosticHook hook = [&](const WaveState& s) { states.push_back(s); };
  const auto trace = evolve(scaled_ground_state(grid, 1.2, 1.0, truncation), cfg, std::span<const DiagnosticHook>(&hook, 1));
  c.note("outcome", to_string(trace.outcome.kind));
  c.require(trace.outcome.kind == OutcomeKind::BlewUp, "documented run blows up");

  double worst_g = 0.0, worst_h = 0.0, worst_y = 0.0;
  int checked = 0;
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    if (sup_abs(states[k].u) >= 1e3) break;
    const double dt_m = states[k].t - states[k - 1].t, dt_p = states[k + 1].t - states[k].t;
    if (std::abs(dt_m - dt_p) > 1e-9 * dt_p) continue;
    const double dt = dt_p;
    const auto gm = virial_G_R(states[k - 1], phi, R), g0 = virial_G_R(states[k], phi, R),
               gp = virial_G_R(states[k + 1], phi, R);
    const auto ym = blowup_y_R(states[k - 1], phi, R), y0 = blowup_y_R(states[k], phi, R),
               yp = blowup_y_R(states[k + 1], phi, R);
    const double tol_g = std::max(1e-3 * g0.scale, 5.0 * g0.kappa);
    const double tol_y = std::max(1e-3 * y0.scale, 5.0 * g0.kappa);
    worst_g = std::max(worst_g, std::abs((gp.G - gm.G) / (2.0 * dt) - g0.G_dot_predicted) / tol_g);
    worst_h = std::max(worst_h, std::abs((gp.H - gm.H) / (2.0 * dt) - g0.H_dot_predicted) / tol_g);
    worst_y = std::max(worst_y, std::abs((yp.y - 2.0 * y0.y + ym.y) / (dt * dt) - y0.y_ddot_predicted) / tol_y);
    ++checked;
  }
  c.note("samples", checked);
  c.note("worst_G_err_over_tol", worst_g);
  c.note("worst_H_err_over_tol", worst_h);
  c.note("worst_y_err_over_tol", worst_y);
  c.require(checked > 10, "enough samples");
  c.require(worst_g <= 1.0, "dG/dt identity");
  c.require(worst_h <= 1.0, "second G identity");
  c.require(worst_y <= 1.0, "y'' identity");
}

ExperimentConfig threshold_config() {
  ExperimentConfig cfg;
  cfg.dim = 3;
  cfg.cells = 8192;
  cfg.coefficient = CoefficientSpec::sinh_power(2.0);
  cfg.data.family = DataFamily::scaled_ground_state;
  cfg.data.lambda = 0.5;
  cfg.data.truncation = 16.0;
  cfg.solver.cfl = 0.5;
  cfg.solver.t_final = 30.0;
  cfg.solver.coefficient = cfg.coefficient;
  cfg.refine = true;
  return cfg;
}

void threshold(Check& c, const AcceptanceOptions& o) {
  const auto base = threshold_config();
  const double e1 = cached_ground_state_constants(3).energy_E1;
  std::vector<SweepRow> rows;
  int inconsistent = 0;
  for (double a : {0.25, 0.5, 0.75, 1.5, 1.75, 2.0}) {
    auto cfg = base;
    cfg.data = base.data.with_scale(a);
    const auto r = run_experiment(cfg);
    const bool below = a < 1.0;
    const std::string tag = "a=" + std::to_string(a);
    c.require(r.prediction.energy + r.prediction.energy_tolerance < e1, tag + " energy gate verified");
    c.require(r.prediction.verdict == (below ? Verdict::Scatter : Verdict::BlowUp), tag + " prediction");
    c.require(r.outcome.kind == (below ? OutcomeKind::Dispersed : OutcomeKind::BlewUp), tag + " outcome");
    if (!below) c.require(r.outcome.refinement_consistent, tag + " blow-up time stable under refinement");
    if (r.comparison.agreement == Agreement::Inconsistent) ++inconsistent;
    const auto e = r.summary.at("energies");
    rows.push_back({a, e.at("total").get<double>(),
                    std::sqrt(2.0 * e.at("gradient").get<double>()) / cached_ground_state_constants(3).grad_norm(),
                    to_string(r.prediction.verdict), to_string(r.outcome.kind), to_string(r.comparison.agreement)});
    c.detail << tag << ':' << to_string(r.outcome.kind) << '@' << r.outcome.t_event << "; ";
  }
  c.require(inconsistent == 0, "no Inconsistent rows");
  if (!o.artifact_dir.empty()) write_atomic(o.artifact_dir / "threshold_sweep.csv", sweep_csv(rows));
}

void constant_coefficient(Check& c, const AcceptanceOptions&) {
  const auto& ground = cached_ground_state_constants(3);
  const int n = 8192;
  const double truncation = 32.0, t_final = 1.0;
  const RadialGrid grid(3, (2.0 * truncation + t_final) * n / (n - 2.0), n);
  for (double cc : {1.0 / 16.0, 0.5}) {
    for (double a : {0.5, 1.5}) {
      const auto data = scaled_ground_state(grid, a, 1.0, truncation);
      const auto direct = predict_constant_c(data, cc, ground);
      const auto via = predict_focusing(rescale_constant_coefficient(data, cc), CoefficientSpec::constant(1.0), ground);
      c.require(direct.verdict == via.verdict,
                "c=" + std::to_string(cc) + " plain a=" + std::to_string(a) + " two-path prediction");
    }
    // Scaled so the transformed datum is a W; 1.2 W sits above the norm threshold.
    for (double a : {0.5, 1.2}) {
      const auto data = scaled_ground_state(grid, a * std::pow(cc, -0.25), 1.0, truncation);
      const auto direct = predict_constant_c(data, cc, ground);
      const auto rescaled = rescale_constant_coefficient(data, cc);
      const auto via = predict_focusing(rescaled, CoefficientSpec::constant(1.0), ground);
      const std::string tag = "c=" + std::to_string(cc) + " a=" + std::to_string(a);
      c.require(direct.verdict == via.verdict && direct.verdict != Verdict::Indeterminate,
                tag + " two-path prediction (" + to_string(direct.verdict) + " vs " + to_string(via.verdict) + ")");

      SolverConfig cfg;
      cfg.t_final = t_final;
      cfg.coefficient = CoefficientSpec::constant(cc);
      const auto u = evolve_state(data, cfg);
      cfg.coefficient = CoefficientSpec::constant(1.0);
      const auto v = evolve_state(rescaled, cfg);
      const double back = std::pow(cc, -0.25);
      double diff = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) diff = std::max(diff, std::abs(u.u[i] - back * v.u[i]));
      c.note(tag + " sup_diff", diff);
      c.require(diff <= 1e-6, tag + " two-run agreement");
    }
  }
}

void hyperbolic(Check& c, const AcceptanceOptions&) {
  const auto& ground = cached_ground_state_constants(3);
  const RadialGrid grid(3, 8.0, 4096);
  const auto [v, vt] = h3_family(grid, 0.5, 1.0);
  const auto tv = T_forward(v);
  const WaveState euclid(tv, T_forward(vt));

  const double l2_e = lp_norm(tv, 2.0), l2_h = h3_l2_norm(v);
  const double h1_e = h1_seminorm(tv), h1_h = std::sqrt(h3_h01_norm(v).norm_sq());
  c.note("L2_rel", rel(l2_e, l2_h));
  c.note("H01_rel", rel(h1_e, h1_h));
  c.require(rel(l2_e, l2_h) <= 1e-6, "L2 isometry");
  c.require(rel(h1_e, h1_h) <= 1e-6, "H01 isometry");

  const double e_h = h3_energy(v, vt), e_phi = energy(euclid, h3_coefficient(), 1).total;
  c.note("energy_rel", rel(e_h, e_phi));
  c.require(rel(e_h, e_phi) <= 1e-6, "h3 energy equals transformed energy");

  const double res_coarse = intertwining_residual(h3_family(RadialGrid(3, 8.0, 1024), 0.5, 1.0).first);
  const double res_fine = intertwining_residual(h3_family(RadialGrid(3, 8.0, 4096), 0.5, 1.0).first);
  const double order = std::log(res_coarse / res_fine) / std::log(4.0);
  c.note("intertwining_order", order);
  c.require(order >= 1.9, "intertwining residual second order");

  int blowups = 0, scatters = 0;
  for (double amp : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const auto [a0, a1] = h3_family(grid, amp, 1.0);
    const auto p = h3_predict(a0, a1, ground);
    const auto q = predict_focusing(WaveState(T_forward(a0), T_forward(a1)), h3_coefficient(), ground);
    // Direct evaluation on H^3 with the same margins.
    const double e = h3_energy(a0, a1), norm = std::sqrt(h3_h01_norm(a0).norm_sq());
    Verdict direct = Verdict::Indeterminate;
    if (ground.energy_E1 - e > p.energy_tolerance) {
      if (ground.grad_norm() - norm > p.norm_tolerance) direct = Verdict::Scatter;
      else if (norm - ground.grad_norm() > p.norm_tolerance) direct = Verdict::BlowUp;
    }
    const std::string tag = "A=" + std::to_string(amp);
    c.require(p.verdict == q.verdict, tag + " h3_predict matches the transformed prediction");
    c.require(p.verdict == direct, tag + " matches direct H^3 evaluation");
    blowups += p.verdict == Verdict::BlowUp;
    scatters += p.verdict == Verdict::Scatter;
  }
  c.note("scatter_points", scatters);
  c.note("blowup_points", blowups);
  c.require(scatters > 0 && blowups > 0, "sweep covers both sides of the threshold");
}

void conditions(Check& c, const AcceptanceOptions&) {
  const int d = 3;
  const auto coarse = condition_scan_grid(d);
  const auto fine = coarse.refined();
  auto stable = [&](const CoefficientSpec& s, auto check) {
    const auto a = check(s, coarse), b = check(s, fine);
    c.require(a.pass == b.pass, s.name() + " verdict stable under refinement");
    return a;
  };
  for (int sigma = 2; sigma <= 6; ++sigma) {
    const auto s = CoefficientSpec::sinh_power(sigma);
    c.require(stable(s, check_focusing_condition).pass, s.name() + " focusing condition");
  }
  const auto flat = stable(CoefficientSpec::constant(1.0), check_focusing_condition);
  c.note("constant_min", flat.min_value);
  c.require(flat.pass && std::abs(flat.min_value) <= kNonStrictTolerance, "constant(1) focusing with equality");
  std::vector<CoefficientSpec> decreasing = {CoefficientSpec::constant(1.0), CoefficientSpec::gaussian(1.0),
                                             CoefficientSpec::gaussian(0.1)};
  for (int sigma = 1; sigma <= 6; ++sigma) decreasing.push_back(CoefficientSpec::sinh_power(sigma));
  for (int dim : {3, 4, 5}) {
    const auto g = condition_scan_grid(dim);
    for (const auto& s : decreasing) {
      const auto a = check_defocusing_condition(s, g), b = check_defocusing_condition(s, g.refined());
      c.require(a.pass && b.pass, s.name() + " defocusing condition, d=" + std::to_string(dim));
    }
  }
}

struct Entry {
  const char* name;
  double limit;
  void (*run)(Check&, const AcceptanceOptions&);
};

const Entry kEntries[] = {
    {"constants", 1.0, constants},
    {"stationarity", 1.0, stationarity},
    {"linear_exactness", 1.0, linear_exactness},
    {"free_decay", 30.0, free_decay},
    {"energy_conservation", 30.0, energy_conservation},
    {"morawetz", 60.0, morawetz},
    {"virial", 60.0, virial},
    {"threshold", 600.0, threshold},
    {"constant_coefficient", 60.0, constant_coefficient},
    {"hyperbolic", 120.0, hyperbolic},
    {"conditions", 10.0, conditions},
};

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kEntries) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

CriterionResult run_criterion(const std::string& name, const AcceptanceOptions& options) {
  for (std::size_t k = 0; k < std::size(kEntries); ++k) {
    const auto& e = kEntries[k];
    if (name != e.name) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.run(check, options);
    } catch (const std::exception& ex) {
      check.require(false, std::string("error: ") + ex.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(seconds < e.limit, "runtime limit " + std::to_string(e.limit) + " s");
    return {static_cast<int>(k + 1), e.name, check.pass, seconds, e.limit, check.detail.str()};
  }
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, const std::vector<std::string>& only) {
  for (const auto& n : only) {
    if (std::find(criterion_names().begin(), criterion_names().end(), n) == criterion_names().end())
      throw std::invalid_argument("unknown criterion '" + n + "'");
  }
  std::vector<CriterionResult> out;
  for (const auto& n : criterion_names()) {
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    out.push_back(run_criterion(n, options));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.pass ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << ' ' << r.name << "  (" << std::fixed
     << r.seconds << " s)  " << r.detail;
  return os.str();
}

}  // namespace critwave

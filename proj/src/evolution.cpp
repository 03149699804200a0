#include "critwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "critwave/functionals.hpp"
#include "critwave/ground_state.hpp"

namespace critwave {

namespace {

// |x|^{p-1} x and |x|^{2*} for the three critical powers.
double critical_nonlinearity(int d, double x) {
  switch (d) {
    case 3: {
      const double x2 = x * x;
      return x2 * x2 * x;
    }
    case 4: return x * x * x;
    default: {
      const double c = std::cbrt(x);
      return c * c * c * c * c * c * c;
    }
  }
}

double abs_pow(double x, double q) {
  const double a = std::abs(x);
  if (a == 0.0) return 0.0;
  if (q == 6.0) {
    const double a2 = a * a;
    return a2 * a2 * a2;
  }
  if (q == 10.0) {
    const double a2 = a * a, a4 = a2 * a2;
    return a4 * a4 * a2;
  }
  if (q == 4.0) return a * a * a * a;
  return std::pow(a, q);
}

// Semi-discrete system q'' = A(q) with diagonal mass. For d = 3, q = r u;
// otherwise q = u on finite-volume cells around each node.
class Scheme {
 public:
  Scheme(const RadialGrid& grid, const CoefficientSpec& spec, int zeta, bool linear)
      : grid_(grid), d_(grid.dim()), n_(grid.cells()), dr_(grid.dr()), linear_(linear) {
    const std::size_t size = grid.size();
    q.assign(size, 0.0);
    p.assign(size, 0.0);
    a.assign(size, 0.0);
    coef_.assign(size, 0.0);
    inv_r_.assign(size, 0.0);
    for (std::size_t i = 1; i < size; ++i) inv_r_[i] = 1.0 / grid.r(i);
    if (d_ == 3) {
      for (std::size_t i = 1; i < size; ++i) {
        const double r2 = grid.r(i) * grid.r(i);
        coef_[i] = zeta * spec.eval(grid.r(i)).value / (r2 * r2);
      }
    } else {
      mass_.assign(size, 0.0);
      edge_.assign(size, 0.0);
      for (std::size_t i = 0; i < size; ++i) {
        const double lo = i == 0 ? 0.0 : (i - 0.5) * dr_;
        const double hi = (i + 0.5) * dr_;
        mass_[i] = (std::pow(hi, d_) - std::pow(lo, d_)) / d_;
        edge_[i] = std::pow(hi, d_ - 1);
        coef_[i] = zeta * spec.eval(grid.r(i)).value;
      }
    }
    phi_.resize(size);
    for (std::size_t i = 0; i < size; ++i) phi_[i] = zeta * spec.eval(grid.r(i)).value;
  }

  void load(const WaveState& s) {
    if (!(s.grid() == grid_)) throw std::invalid_argument("state grid differs from solver grid");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double scale = d_ == 3 ? grid_.r(i) : 1.0;
      q[i] = scale * s.u[i];
      p[i] = scale * s.u_t[i];
    }
    if (d_ == 3) q[0] = p[0] = 0.0;
    p[n_] = 0.0;
    acceleration();
  }

  WaveState state(double t) const {
    RadialField u(grid_), ut(grid_);
    for (std::size_t i = 0; i < q.size(); ++i) {
      u.values[i] = displacement(i);
      ut.values[i] = d_ == 3 ? p[i] * inv_r_[i] : p[i];
    }
    if (d_ == 3) {
      u.values[0] = origin_value(u.values);
      ut.values[0] = origin_value(ut.values);
    }
    return WaveState(std::move(u), std::move(ut), t);
  }

  // u is even in r: polynomial extrapolation in r^2 from nodes 1..4.
  static double origin_value(const std::vector<double>& u) {
    return (56.0 * u[1] - 28.0 * u[2] + 8.0 * u[3] - u[4]) / 35.0;
  }

  double displacement(std::size_t i) const { return d_ == 3 ? q[i] * inv_r_[i] : q[i]; }

  void acceleration() {
    const double inv_h2 = 1.0 / (dr_ * dr_);
    if (d_ == 3) {
      a[0] = 0.0;
      for (int i = 1; i < n_; ++i) {
        a[i] = (q[i + 1] - 2.0 * q[i] + q[i - 1]) * inv_h2;
        if (!linear_) a[i] += coef_[i] * critical_nonlinearity(3, q[i]);
      }
    } else {
      double flux_lo = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double flux_hi = edge_[i] * (q[i + 1] - q[i]) / dr_;
        a[i] = (flux_hi - flux_lo) / mass_[i];
        if (!linear_) a[i] += coef_[i] * critical_nonlinearity(d_, q[i]);
        flux_lo = flux_hi;
      }
    }
    a[n_] = 0.0;
  }

  void step(double dt) {
    const double half = 0.5 * dt;
    for (std::size_t i = 0; i < q.size(); ++i) {
      p[i] += half * a[i];
      q[i] += dt * p[i];
    }
    acceleration();
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += half * a[i];
  }

  struct Parts {
    double kinetic, gradient, potential;
  };

  // Halved sums of the scheme's quadratic forms and the potential (1/2*) sum.
  Parts parts() const {
    const double q2s = sobolev_exponent(d_);
    double kin = 0.0, grad = 0.0, pot = 0.0;
    if (d_ == 3) {
      for (int i = 1; i < n_; ++i) {
        kin += p[i] * p[i];
        const double r2 = grid_.r(i) * grid_.r(i);
        const double q2 = q[i] * q[i];
        pot += phi_[i] * q2 * q2 * q2 / (r2 * r2);
      }
      for (int i = 0; i < n_; ++i) grad += (q[i + 1] - q[i]) * (q[i + 1] - q[i]);
      kin *= dr_;
      pot *= dr_;
      grad /= dr_;
    } else {
      for (int i = 0; i < n_; ++i) {
        kin += mass_[i] * p[i] * p[i];
        pot += mass_[i] * phi_[i] * abs_pow(q[i], q2s);
        grad += edge_[i] * (q[i + 1] - q[i]) * (q[i + 1] - q[i]) / dr_;
      }
    }
    const double w = grid_.sphere_area();
    return {0.5 * w * kin, 0.5 * w * grad, w * pot / q2s};
  }

  double sup_u() const {
    double s = 0.0;
    for (std::size_t i = d_ == 3 ? 1 : 0; i < q.size(); ++i) s = std::max(s, std::abs(displacement(i)));
    if (d_ == 3) {
      const std::vector<double> head = {0.0, displacement(1), displacement(2), displacement(3), displacement(4)};
      s = std::max(s, std::abs(origin_value(head)));
    }
    if (std::isnan(s)) return std::numeric_limits<double>::quiet_NaN();
    for (double v : q)
      if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    return s;
  }

  std::vector<double> q, p, a;

 private:
  RadialGrid grid_;
  int d_;
  int n_;
  double dr_;
  bool linear_;
  std::vector<double> coef_, inv_r_, mass_, edge_, phi_;
};

// Per-step integrands for the Morawetz and Y-norm accumulators.
class Accumulators {
 public:
  Accumulators(const RadialGrid& grid, const CoefficientSpec& spec, bool morawetz)
      : d_(grid.dim()), morawetz_(morawetz) {
    const auto vw = grid.volume_weights();
    const auto eta = morawetz_weight(spec, grid);
    mw_.assign(grid.size(), 0.0);
    yw_.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phi = spec.eval(grid.r(i)).value;
      yw_[i] = vw[i] * phi * phi;
      if (i > 0) mw_[i] = vw[i] * eta[i] / grid.r(i);
    }
  }

  void sample(const Scheme& s, std::size_t size) {
    const double q = sobolev_exponent(d_);
    const double two_p = 2.0 * critical_power(d_);
    double m = 0.0, y = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const double u = s.displacement(i);
      if (u == 0.0 || (d_ == 3 && i == 0)) continue;
      if (morawetz_) m += mw_[i] * abs_pow(u, q);
      y += yw_[i] * abs_pow(u, two_p);
    }
    current_m_ = m;
    current_y_ = std::sqrt(y);
  }

  void advance(double dt) {
    morawetz_sum += 0.5 * dt * (previous_m_ + current_m_);
    y_sum += 0.5 * dt * (previous_y_ + current_y_);
    previous_m_ = current_m_;
    previous_y_ = current_y_;
  }

  void start() {
    previous_m_ = current_m_;
    previous_y_ = current_y_;
  }

  double y_norm() const { return std::pow(y_sum, 1.0 / critical_power(d_)); }

  double morawetz_sum = 0.0;
  double y_sum = 0.0;

 private:
  int d_;
  bool morawetz_;
  std::vector<double> mw_, yw_;
  double previous_m_ = 0.0, current_m_ = 0.0, previous_y_ = 0.0, current_y_ = 0.0;
};

double cutoff_for(const SolverConfig& c, const RadialGrid& g) {
  return c.cutoff_radius > 0.0 ? c.cutoff_radius : g.r_max() / 2.0;
}

void classify_completed(RunTrace& trace, const WaveState& final_state) {
  Outcome& out = trace.outcome;
  if (final_state.is_zero()) {
    out.kind = OutcomeKind::Dispersed;
    out.final_potential_fraction = 0.0;
    out.sup_tail_monotone = true;
    out.note = "zero state";
    return;
  }
  const auto e = energy(final_state, trace.coefficient, trace.zeta);
  const double pot = sobolev_exponent(trace.dim) * e.potential;
  out.final_potential_fraction = e.total > 0.0 ? pot / e.total : std::numeric_limits<double>::infinity();

  const double t0 = trace.rows.front().t;
  const double t1 = trace.rows.back().t;
  const double tail_start = t0 + 0.8 * (t1 - t0);
  bool monotone = true;
  const TraceRow* prev = nullptr;
  for (const auto& r : trace.rows) {
    if (r.t < tail_start) continue;
    if (prev && r.sup_norm > prev->sup_norm * (1.0 + 1e-12)) monotone = false;
    prev = &r;
  }
  out.sup_tail_monotone = monotone;
  if (out.final_potential_fraction <= 1e-3 && monotone) {
    out.kind = OutcomeKind::Dispersed;
    out.note = "heuristic dispersion proxy";
  } else {
    out.kind = OutcomeKind::Undecided;
    out.note = "neither cap hit nor dispersion proxy met";
  }
}

}  // namespace

double SolverConfig::step(const RadialGrid& grid) const {
  const int n = steps(grid);
  return n == 0 ? cfl * grid.dr() : t_final / n;
}

int SolverConfig::steps(const RadialGrid& grid) const {
  if (t_final <= 0.0) return 0;
  return static_cast<int>(std::ceil(t_final / (cfl * grid.dr()) - 1e-9));
}

void SolverConfig::validate(const RadialGrid& grid) const {
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  if (cfl > cfl_limit() + 1e-12) throw std::invalid_argument("cfl exceeds the allowed maximum");
  if (cfl > stability_cfl(grid) + 1e-12) throw std::invalid_argument("cfl exceeds the stability limit of this grid");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be nonnegative");
  if (zeta != 1 && zeta != -1) throw std::invalid_argument("zeta must be +1 or -1");
  if (!(blowup_sup_cap > 0.0) || !(blowup_h_cap > 0.0)) throw std::invalid_argument("caps must be positive");
  if (cadence < 1) throw std::invalid_argument("cadence must be at least 1");
  if (cutoff_radius < 0.0 || cutoff_radius > grid.r_max() / 2.0)
    throw std::invalid_argument("cutoff radius must lie in [0, r_max/2]");
}

double stability_cfl(const RadialGrid& grid) {
  const int d = grid.dim();
  if (d == 3) return 1.0;
  // In units dr = 1 the bound depends only on the cell index.
  auto mass = [d](int i) {
    const double lo = i == 0 ? 0.0 : i - 0.5;
    return (std::pow(i + 0.5, d) - std::pow(lo, d)) / d;
  };
  auto edge = [d](int i) { return i < 0 ? 0.0 : std::pow(i + 0.5, d - 1); };
  double lambda = 0.0;
  const int scan = std::min(grid.cells() - 1, 64);
  for (int i = 0; i <= scan; ++i) {
    const double m = mass(i);
    double row = (edge(i) + edge(i - 1)) / m;
    row += edge(i) / std::sqrt(m * mass(i + 1));
    if (i > 0) row += edge(i - 1) / std::sqrt(m * mass(i - 1));
    lambda = std::max(lambda, row);
  }
  return 2.0 / std::sqrt(lambda);
}

double required_domain_radius(double support_radius, double t_final, double dr) {
  if (support_radius < 0.0 || t_final < 0.0 || dr < 0.0) throw std::invalid_argument("inputs must be nonnegative");
  return support_radius + t_final + 2.0 * dr;
}

double state_support_radius(const WaveState& state) {
  return std::max(support_radius(state.u), support_radius(state.u_t));
}

RunTrace evolve(const WaveState& initial, const SolverConfig& config, std::span<const DiagnosticHook> hooks) {
  const auto& grid = initial.grid();
  config.validate(grid);
  if (!initial.is_finite()) throw std::invalid_argument("initial data not finite");
  const double needed = required_domain_radius(state_support_radius(initial), config.t_final, grid.dr());
  const bool sufficient = grid.r_max() >= needed - 1e-9 * needed;
  if (config.enforce_domain && !sufficient)
    throw std::invalid_argument("domain too small for finite-speed propagation: need r_max >= " +
                                std::to_string(needed));

  RunTrace trace;
  trace.dim = grid.dim();
  trace.zeta = config.zeta;
  trace.coefficient = config.coefficient;
  trace.cutoff_radius = cutoff_for(config, grid);
  trace.dt = config.step(grid);
  trace.cfl = trace.dt / grid.dr();
  trace.cells = grid.cells();
  trace.r_max = grid.r_max();
  trace.domain_sufficient = sufficient;

  Scheme scheme(grid, config.coefficient, config.zeta, config.linear);
  scheme.load(initial);
  Accumulators acc(grid, config.coefficient, config.zeta == -1);
  acc.sample(scheme, grid.size());
  acc.start();

  const double h_cap = config.blowup_h_cap * cached_ground_state_constants(grid.dim()).grad_norm();
  const int steps = config.steps(grid);
  const double dt = trace.dt;

  auto record = [&](double t) {
    const auto s = scheme.state(t);
    const RowContext ctx{&config.coefficient, config.zeta, trace.cutoff_radius, acc.y_norm(), acc.morawetz_sum};
    trace.rows.push_back(diagnostics_row(s, ctx));
    for (const auto& h : hooks) h(s);
    return s;
  };

  WaveState last = record(initial.t);
  trace.initial_energy = trace.rows.front().E_total;

  for (int k = 1; k <= steps; ++k) {
    scheme.step(dt);
    const double t = initial.t + k * dt;
    const double sup = scheme.sup_u();
    const auto parts = scheme.parts();
    const double h = std::sqrt(2.0 * (parts.kinetic + parts.gradient));
    if (std::isnan(sup) || !std::isfinite(h)) {
      trace.outcome.kind = OutcomeKind::Undecided;
      trace.outcome.nan_detected = true;
      trace.outcome.t_event = t;
      trace.outcome.note = "non-finite values before any cap";
      return trace;
    }
    acc.sample(scheme, grid.size());
    acc.advance(dt);
    if (sup >= config.blowup_sup_cap || h >= h_cap) {
      last = record(t);
      last.blown_up = true;
      trace.outcome.kind = OutcomeKind::BlewUp;
      trace.outcome.t_event = t;
      trace.outcome.note = sup >= config.blowup_sup_cap ? "sup-norm cap" : "energy-norm cap";
      return trace;
    }
    if (k % config.cadence == 0 || k == steps) last = record(t);
  }
  classify_completed(trace, last);
  return trace;
}

WaveState evolve_state(const WaveState& initial, const SolverConfig& config) {
  WaveState out = initial;
  const DiagnosticHook keep = [&out](const WaveState& s) { out = s; };
  SolverConfig c = config;
  c.cadence = std::max(1, config.steps(initial.grid()));
  evolve(initial, c, std::span<const DiagnosticHook>(&keep, 1));
  return out;
}

WaveState evolve_linear(const WaveState& initial, double t_final, double cfl) {
  SolverConfig c;
  c.linear = true;
  c.cfl = cfl;
  c.t_final = t_final;
  return evolve_state(initial, c);
}

double scheme_energy(const WaveState& state, const CoefficientSpec& spec, int zeta) {
  Scheme s(state.grid(), spec, zeta, false);
  s.load(state);
  const auto parts = s.parts();
  // parts() folds zeta into the potential already.
  return parts.kinetic + parts.gradient - parts.potential;
}

DecayFit free_decay_test(const WaveState& initial, std::span<const double> t_samples, double cfl) {
  if (t_samples.size() < 3) throw std::invalid_argument("too few samples");
  for (std::size_t k = 0; k < t_samples.size(); ++k) {
    if (!(t_samples[k] > 0.0) || (k > 0 && t_samples[k] <= t_samples[k - 1]))
      throw std::invalid_argument("samples must be positive and increasing");
  }
  if (initial.is_zero()) throw std::invalid_argument("degenerate data");

  const auto& grid = initial.grid();
  SolverConfig c;
  c.linear = true;
  c.cfl = cfl;
  c.t_final = t_samples.back();
  c.validate(grid);
  const double needed = required_domain_radius(state_support_radius(initial), c.t_final, grid.dr());
  if (grid.r_max() < needed - 1e-9 * needed) throw std::invalid_argument("domain too small for the decay window");

  Scheme scheme(grid, CoefficientSpec::constant(1.0), 1, true);
  scheme.load(initial);
  const double dt = cfl * grid.dr();
  const double q = sobolev_exponent(grid.dim());
  DecayFit fit{};
  long k = 0;
  for (double target : t_samples) {
    const long want = std::lround((target - initial.t) / dt);
    for (; k < want; ++k) scheme.step(dt);
    const auto s = scheme.state(initial.t + k * dt);
    double sup = 0.0;
    for (double v : s.u.values) sup = std::max(sup, std::abs(v));
    fit.t.push_back(s.t);
    fit.l2star.push_back(lp_norm(s.u, q));
    fit.sup.push_back(sup);
  }

  fit.fit_from = fit.t.back() / 10.0;
  auto slope = [&](const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < fit.t.size(); ++i) {
      if (fit.t[i] < fit.fit_from - 1e-12) continue;
      if (!(y[i] > 0.0)) throw std::invalid_argument("degenerate data");
      const double x = std::log(fit.t[i]), v = std::log(y[i]);
      sx += x;
      sy += v;
      sxx += x * x;
      sxy += x * v;
      ++m;
    }
    if (m < 2) throw std::invalid_argument("too few samples in the last decade");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  fit.slope_l2star = slope(fit.l2star);
  fit.slope_sup = slope(fit.sup);
  return fit;
}

WaveState rescale_constant_coefficient(const WaveState& state, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double k = std::pow(c, (state.grid().dim() - 2.0) / 4.0);
  WaveState out = state;
  for (auto& v : out.u.values) v *= k;
  for (auto& v : out.u_t.values) v *= k;
  return out;
}

RefinedRun evolve_refined(const DataBuilder& data, const RadialGrid& grid, const SolverConfig& config) {
  const RadialGrid fine_grid = grid.refined();
  auto fine_future = std::async(std::launch::async, [&] { return evolve(data(fine_grid), config); });
  RefinedRun run{evolve(data(grid), config), {}, {}};
  run.fine = fine_future.get();

  const auto& a = run.coarse.outcome;
  const auto& b = run.fine.outcome;
  Outcome& out = run.outcome;
  out.t_event = b.t_event;
  out.final_potential_fraction = b.final_potential_fraction;
  out.sup_tail_monotone = b.sup_tail_monotone;
  out.nan_detected = a.nan_detected || b.nan_detected;
  if (a.kind == OutcomeKind::BlewUp && b.kind == OutcomeKind::BlewUp) {
    const double spread = std::abs(a.t_event - b.t_event);
    out.refinement_consistent = spread <= 0.05 * std::max(a.t_event, b.t_event);
    out.kind = out.refinement_consistent ? OutcomeKind::BlewUp : OutcomeKind::Undecided;
    out.note = out.refinement_consistent ? "cap hit at both resolutions" : "cap times disagree between resolutions";
  } else if (a.kind == OutcomeKind::Dispersed && b.kind == OutcomeKind::Dispersed) {
    out.kind = OutcomeKind::Dispersed;
    out.note = b.note;
  } else {
    out.kind = OutcomeKind::Undecided;
    out.note = "resolutions disagree: " + to_string(a.kind) + " vs " + to_string(b.kind);
  }
  return run;
}

}  // namespace critwave

#include "critwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace critwave {

namespace {

void require_same_grid(const WaveState& s) {
  if (!(s.u.grid == s.u_t.grid)) throw std::invalid_argument("u and u_t live on different grids");
}

// |u|^{2*} on the grid.
std::vector<double> critical_power_of(const RadialField& u) {
  const double q = sobolev_exponent(u.grid.dim());
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(std::abs(u[i]), q);
  return out;
}

struct Pieces {
  RadialField ur;
  std::vector<double> phi;
  std::vector<double> r_dphi;
  std::vector<double> pow2s;
};

Pieces pieces(const WaveState& s, const CoefficientSpec& spec) {
  Pieces p{radial_derivative(s.u), {}, {}, critical_power_of(s.u)};
  const auto& g = s.grid();
  p.phi.resize(g.size());
  p.r_dphi.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = spec.eval(g.r(i));
    p.phi[i] = v.value;
    p.r_dphi[i] = g.r(i) * v.d_dr;
  }
  return p;
}

}  // namespace

CutoffValue cutoff(double r, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("cutoff radius must be positive");
  if (r <= R) return {1.0, 0.0};
  if (r >= 2.0 * R) return {0.0, 0.0};
  const double s = (r - R) / R;
  const double s2 = s * s;
  const double step = s2 * s * (10.0 - 15.0 * s + 6.0 * s2);
  const double dstep = 30.0 * s2 * (1.0 - s) * (1.0 - s);
  return {1.0 - step, -dstep / R};
}

RadialField cutoff_field(const RadialGrid& grid, double R) {
  return sample(grid, [R](double r) { return cutoff(r, R).value; });
}

EnergyParts energy(const WaveState& state, const CoefficientSpec& spec, int zeta) {
  require_same_grid(state);
  const auto& g = state.grid();
  const auto w = g.volume_weights();
  const auto ur = radial_derivative(state.u);
  const double q = sobolev_exponent(g.dim());
  double kin = 0.0, grad = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    kin += w[i] * state.u_t[i] * state.u_t[i];
    grad += w[i] * ur[i] * ur[i];
    if (w[i] != 0.0 && state.u[i] != 0.0)
      pot += w[i] * spec.eval(g.r(i)).value * std::pow(std::abs(state.u[i]), q);
  }
  EnergyParts e{0.0, 0.5 * kin, 0.5 * grad, pot / q};
  e.total = e.kinetic + e.gradient - zeta * e.potential;
  return e;
}

double admissible_delta(double energy, double energy_E1) {
  if (!(energy_E1 > 0.0)) throw std::invalid_argument("E_1 must be positive");
  const double gap = 1.0 - energy / energy_E1;
  return std::min(0.5 * gap, 0.999);
}

TrappingReport trapping_check(const WaveState& state, const CoefficientSpec& spec, double delta,
                              const GroundStateConstants& ground) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const int d = state.grid().dim();
  if (d != ground.dim) throw std::invalid_argument("ground-state constants for another dimension");
  const double q = sobolev_exponent(d);
  const auto e = energy(state, spec, +1);
  const double grad2 = 2.0 * e.gradient;
  const double kin2 = 2.0 * e.kinetic;
  const double plain_pow = integrate(state.grid(), critical_power_of(state.u));

  TrappingReport rep{};
  rep.delta = delta;
  rep.hypotheses_hold = std::sqrt(grad2) < ground.grad_norm() && e.total < (1.0 - delta) * ground.energy_E1;
  rep.h_norm = std::sqrt(grad2 + kin2);
  rep.h_bound = std::sqrt(1.0 - 2.0 * delta / d) * ground.grad_norm();
  rep.h_bound_holds = rep.h_norm < rep.h_bound;
  rep.lower_constant = 1.0 - std::pow(1.0 - 2.0 * delta / d, (q - 2.0) / 2.0);
  if (grad2 == 0.0 && kin2 == 0.0) {
    rep.ratio_gradient = rep.ratio_energy = 1.0;
    rep.gradient_ratio_holds = rep.energy_ratio_holds = true;
    return rep;
  }
  const double c = rep.lower_constant;
  const double slack = 1e-9;
  rep.ratio_gradient = grad2 > 0.0 ? (grad2 - plain_pow) / grad2 : 1.0;
  rep.gradient_ratio_holds = rep.ratio_gradient >= c - slack && rep.ratio_gradient <= 1.0 + slack;
  rep.ratio_energy = e.total > 0.0 ? (kin2 + grad2 - plain_pow) / e.total
                                   : std::numeric_limits<double>::infinity();
  rep.energy_ratio_holds = rep.ratio_energy >= 2.0 * c - slack && rep.ratio_energy <= d + slack;
  return rep;
}

double y_norm_density(const RadialField& u, const CoefficientSpec& spec, YNorm variant) {
  const auto& g = u.grid;
  const double two_p = 2.0 * critical_power(g.dim());
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double v = std::pow(std::abs(u[i]), two_p);
    if (variant == YNorm::weighted && v != 0.0) {
      const double phi = spec.eval(g.r(i)).value;
      v *= phi * phi;
    }
    f[i] = v;
  }
  return std::sqrt(integrate(g, f));
}

double y_norm_accumulate(std::span<const WaveState> window, const CoefficientSpec& spec, YNorm variant) {
  if (window.empty()) throw std::invalid_argument("empty window");
  if (window.size() == 1) return 0.0;
  const double dt = window[1].t - window[0].t;
  if (!(dt > 0.0)) throw std::invalid_argument("window must be increasing in time");
  for (std::size_t k = 1; k < window.size(); ++k) {
    if (std::abs((window[k].t - window[k - 1].t) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("window is not uniformly sampled");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < window.size(); ++k) {
    const double w = (k == 0 || k + 1 == window.size()) ? 0.5 : 1.0;
    sum += w * dt * y_norm_density(window[k].u, spec, variant);
  }
  return std::pow(sum, 1.0 / critical_power(window.front().grid().dim()));
}

double morawetz_density(const RadialField& u, const RadialField& eta) {
  if (!(u.grid == eta.grid)) throw std::invalid_argument("weight on a different grid");
  const auto& g = u.grid;
  const double q = sobolev_exponent(g.dim());
  std::vector<double> f(g.size(), 0.0);
  // The integrand times r^{d-1} vanishes at the origin for d >= 3.
  for (std::size_t i = 1; i < g.size(); ++i) f[i] = eta[i] * std::pow(std::abs(u[i]), q) / g.r(i);
  return integrate(g, f);
}

MorawetzResult morawetz_accumulate(const RunTrace& trace) {
  if (trace.zeta != -1) throw std::invalid_argument("Morawetz estimate applies to defocusing runs only");
  if (!check_defocusing_condition(trace.coefficient, condition_scan_grid(trace.dim)).pass)
    throw std::invalid_argument("coefficient fails the defocusing condition");
  const double lhs = trace.rows.empty() ? 0.0 : trace.rows.back().morawetz_accum;
  const double d = trace.dim;
  return {lhs, 2.0 * d / (d - 1.0) * trace.initial_energy};
}

VirialG virial_G_R(const WaveState& state, const CoefficientSpec& spec, double R, int zeta) {
  require_same_grid(state);
  const auto& g = state.grid();
  if (!(R > 0.0) || R > g.r_max() / 2.0) throw std::invalid_argument("cutoff radius must lie in (0, r_max/2]");
  const auto p = pieces(state, spec);
  const int d = g.dim();
  const double q = sobolev_exponent(d);
  const std::size_t n = g.size();
  std::vector<double> a(n), b(n), kin(n), grad(n), pot(n), dphi_term(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.r(i);
    const double cut = cutoff(r, R).value;
    const double u = state.u[i], ut = state.u_t[i], ur = p.ur[i];
    a[i] = r * ur * ut * cut;
    b[i] = cut * u * ut;
    kin[i] = ut * ut;
    grad[i] = ur * ur;
    pot[i] = p.phi[i] * p.pow2s[i];
    dphi_term[i] = p.r_dphi[i] * p.pow2s[i] * cut;
    scale[i] = kin[i] + grad[i] + pot[i];
  }
  VirialG v{};
  v.H = integrate(g, b);
  v.G = integrate(g, a) + 0.5 * d * v.H;
  const double K = integrate(g, kin), D = integrate(g, grad), P = zeta * integrate(g, pot);
  v.G_dot_predicted = -(D - P) - zeta * integrate(g, dphi_term) / q;
  v.H_dot_predicted = K - (D - P);
  v.kappa = tail_kappa(state, R);
  v.scale = integrate(g, scale);
  return v;
}

VirialY blowup_y_R(const WaveState& state, const CoefficientSpec& spec, double R, int zeta) {
  require_same_grid(state);
  const auto& g = state.grid();
  if (!(R > 0.0) || R > g.r_max() / 2.0) throw std::invalid_argument("cutoff radius must lie in (0, r_max/2]");
  const auto p = pieces(state, spec);
  const double d = g.dim();
  const double q = sobolev_exponent(g.dim());
  const std::size_t n = g.size();
  std::vector<double> y(n), yd(n), energy_density(n), kin(n), grad(n), cross(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cutoff(g.r(i), R);
    const double u = state.u[i], ut = state.u_t[i], ur = p.ur[i];
    const double pot = p.phi[i] * p.pow2s[i];
    y[i] = u * u * c.value;
    yd[i] = u * ut * c.value;
    energy_density[i] = (0.5 * ur * ur + 0.5 * ut * ut - zeta * pot / q) * c.value;
    kin[i] = ut * ut * c.value;
    grad[i] = ur * ur * c.value;
    cross[i] = ur * c.d_dr * u;
    scale[i] = ut * ut + ur * ur + pot;
  }
  VirialY v{};
  v.y = integrate(g, y);
  v.y_dot = 2.0 * integrate(g, yd);
  v.y_ddot_predicted = -(4.0 * d / (d - 2.0)) * integrate(g, energy_density) +
                       (4.0 * (d - 1.0) / (d - 2.0)) * integrate(g, kin) +
                       (4.0 / (d - 2.0)) * integrate(g, grad) - 2.0 * integrate(g, cross);
  v.scale = integrate(g, scale);
  return v;
}

double tail_kappa(const WaveState& state, double R) {
  require_same_grid(state);
  const auto& g = state.grid();
  if (R >= g.r_max()) throw std::invalid_argument("tail radius must be below r_max");
  const auto ur = radial_derivative(state.u);
  const auto pw = critical_power_of(state.u);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r(i);
    const double u = state.u[i], ut = state.u_t[i];
    const double hardy = i == 0 ? 0.0 : u * u / (r * r);
    f[i] = ut * ut + ur[i] * ur[i] + hardy + pw[i];
  }
  return integrate_exterior(g, f, R);
}

double hardy_ratio(const RadialField& f) {
  const auto& g = f.grid;
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) v[i] = f[i] * f[i] / (g.r(i) * g.r(i));
  const double h = h1_seminorm(f);
  if (h == 0.0) throw std::invalid_argument("Hardy ratio of a constant field");
  return integrate(g, v) / (h * h);
}

TraceRow diagnostics_row(const WaveState& state, const RowContext& ctx) {
  const auto e = energy(state, *ctx.spec, ctx.zeta);
  const auto y = blowup_y_R(state, *ctx.spec, ctx.cutoff_radius, ctx.zeta);
  double sup = 0.0;
  for (double v : state.u.values) sup = std::max(sup, std::abs(v));
  TraceRow row{};
  row.t = state.t;
  row.E_total = e.total;
  row.E_kinetic = e.kinetic;
  row.E_gradient = e.gradient;
  row.E_potential = e.potential;
  row.sup_norm = sup;
  row.h_norm = std::sqrt(2.0 * (e.kinetic + e.gradient));
  row.y_norm_accum = ctx.y_norm_accum;
  row.morawetz_accum = ctx.morawetz_accum;
  row.G_R = virial_G_R(state, *ctx.spec, ctx.cutoff_radius, ctx.zeta).G;
  row.y_R = y.y;
  row.y_R_dot = y.y_dot;
  row.kappa_R = tail_kappa(state, ctx.cutoff_radius);
  return row;
}

const char* const kTraceColumns[13] = {"t",         "E_total",        "E_kinetic", "E_gradient", "E_potential",
                                       "sup_norm",  "h_norm",         "y_norm_accum", "morawetz_accum",
                                       "G_R",       "y_R",            "y_R_dot",   "kappa_R"};

void write_trace_csv(const RunTrace& trace, std::ostream& os) {
  for (int c = 0; c < 13; ++c) os << (c ? "," : "") << kTraceColumns[c];
  os << '\n';
  const auto old_precision = os.precision(17);
  for (const auto& r : trace.rows) {
    const double vals[13] = {r.t,        r.E_total, r.E_kinetic,    r.E_gradient,   r.E_potential,
                             r.sup_norm, r.h_norm,  r.y_norm_accum, r.morawetz_accum, r.G_R,
                             r.y_R,      r.y_R_dot, r.kappa_R};
    for (int c = 0; c < 13; ++c) os << (c ? "," : "") << vals[c];
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace critwave

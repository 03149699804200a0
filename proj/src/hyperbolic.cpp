#include "critwave/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace critwave {

namespace {

void require_h3(const RadialGrid& g) {
  if (g.dim() != 3) throw std::invalid_argument("hyperbolic fields live on three-dimensional grids");
}

// 4 pi sum_i line_weight_i sinh^2(r_i) f_i.
double h3_sum(const RadialGrid& g, const std::vector<double>& f) {
  const auto lw = g.line_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double sh = std::sinh(g.r(i));
    s += lw[i] * sh * sh * f[i];
  }
  return 4.0 * std::numbers::pi * s;
}

}  // namespace

H3Field::H3Field(RadialGrid g) : grid(std::move(g)), values(grid.size(), 0.0) { require_h3(grid); }

H3Field::H3Field(RadialGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require_h3(grid);
  if (values.size() != grid.size()) throw std::invalid_argument("field length does not match its grid");
}

double sinh_ratio(double r) {
  if (std::abs(r) < 1e-4) return 1.0 + r * r / 6.0;
  return std::sinh(r) / r;
}

RadialField T_forward(const H3Field& f) {
  RadialField g(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) g.values[i] = sinh_ratio(f.grid.r(i)) * f[i];
  return g;
}

H3Field T_inverse(const RadialField& g) {
  H3Field f(g.grid);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = g[i] / sinh_ratio(g.grid.r(i));
  return f;
}

double h3_integrate(const H3Field& f) { return h3_sum(f.grid, f.values); }

double h3_l2_norm(const H3Field& f) { return h3_lp_norm(f, 2.0); }

double h3_lp_norm(const H3Field& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::pow(std::abs(f[i]), p);
  return std::pow(h3_sum(f.grid, v), 1.0 / p);
}

H01Norm h3_h01_norm(const H3Field& f) {
  RadialField as_field(f.grid, f.values);
  const auto df = radial_derivative(as_field);
  std::vector<double> g2(f.size()), m2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g2[i] = df[i] * df[i];
    m2[i] = f[i] * f[i];
  }
  return {h3_sum(f.grid, g2), h3_sum(f.grid, m2)};
}

H3Field h3_laplacian(const H3Field& f) {
  const auto& v = f.values;
  const std::size_t n = v.size() - 1;
  const double h = f.grid.dr();
  H3Field out(f.grid);
  out.values[0] = 3.0 * 2.0 * (v[1] - v[0]) / (h * h);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = f.grid.r(i);
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
    out.values[i] = d2 + 2.0 * d1 / std::tanh(r);
  }
  const double d2 = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / (h * h);
  const double d1 = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  out.values[n] = d2 + 2.0 * d1 / std::tanh(f.grid.r(n));
  return out;
}

double intertwining_residual(const H3Field& f) {
  const auto lhs = radial_laplacian(T_forward(f));
  const auto lap = h3_laplacian(f);
  H3Field shifted(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) shifted.values[i] = -lap[i] - f[i];
  const auto rhs = T_forward(shifted);
  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) sup = std::max(sup, std::abs(-lhs[i] - rhs[i]));
  return sup;
}

double h3_energy(const H3Field& v, const H3Field& v_t) {
  if (!(v.grid == v_t.grid)) throw std::invalid_argument("v and v_t must share a grid");
  const auto h = h3_h01_norm(v);
  const double kin = std::pow(h3_l2_norm(v_t), 2.0);
  const double l6 = std::pow(h3_lp_norm(v, 6.0), 6.0);
  return 0.5 * h.norm_sq() + 0.5 * kin - l6 / 6.0;
}

CoefficientSpec h3_coefficient() { return CoefficientSpec::sinh_power(4.0); }

std::pair<H3Field, H3Field> h3_family(const RadialGrid& grid, double amplitude, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
  H3Field v(grid);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = grid.r(i);
    if (r > 6.0 * width) continue;
    const double z = r / width;
    v.values[i] = amplitude * std::exp(-z * z);
  }
  return {v, H3Field(grid)};
}

H3Run h3_solve(const H3Field& v0, const H3Field& v1, SolverConfig config) {
  config.coefficient = h3_coefficient();
  config.zeta = 1;
  H3Run run{{}, {}, {}, v0, v1};
  const DiagnosticHook pull_back = [&run](const WaveState& s) {
    auto v = T_inverse(s.u);
    auto vt = T_inverse(s.u_t);
    run.t.push_back(s.t);
    run.energy.push_back(h3_energy(v, vt));
    run.v_final = std::move(v);
    run.v_t_final = std::move(vt);
  };
  run.trace = evolve(WaveState(T_forward(v0), T_forward(v1)), config,
                     std::span<const DiagnosticHook>(&pull_back, 1));
  return run;
}

Prediction h3_predict(const H3Field& v0, const H3Field& v1, const GroundStateConstants& ground) {
  auto p = predict_focusing(WaveState(T_forward(v0), T_forward(v1)), h3_coefficient(), ground);
  p.theorem = TheoremId::hyperbolic_threshold;
  return p;
}

}  // namespace critwave

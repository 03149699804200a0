#include "critwave/ground_state.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace critwave {

namespace {

void require_dim(int dim) {
  if (dim < 3 || dim > 5) throw std::invalid_argument("unsupported dimension");
}

double base(int dim, double r) { return 1.0 + r * r / (dim * (dim - 2.0)); }

struct TailSplit {
  double interior;
  double interior_error;
  double tail;
  double tail_error;
};

// w_{d-1} int_0^inf f(r) r^{d-1} dr, Simpson on [0, r_max] plus a Gauss
// quadrature of the exterior in s = r_max / r.
template <class Fn>
TailSplit integrate_with_tail(const RadialGrid& grid, Fn&& f) {
  const auto fine = sample(grid, f);
  const double interior = integrate(fine);
  const double coarse = integrate(restrict_to_coarse(fine));
  const double R = grid.r_max();
  const int d = grid.dim();
  auto in_s = [&](double s) {
    const double r = R / s;
    return f(r) * std::pow(r, d - 1) * R / (s * s);
  };
  const double t8 = detail::composite_gauss(in_s, 0.0, 1.0, 8);
  const double t16 = detail::composite_gauss(in_s, 0.0, 1.0, 16);
  return {interior, std::abs(interior - coarse) / 15.0, grid.sphere_area() * t16,
          grid.sphere_area() * std::abs(t16 - t8)};
}

}  // namespace

double ground_state(int dim, double r) {
  require_dim(dim);
  return std::pow(base(dim, r), -(dim - 2.0) / 2.0);
}

double ground_state_dr(int dim, double r) {
  require_dim(dim);
  return -r / dim * std::pow(base(dim, r), -dim / 2.0);
}

double rescaled_ground_state(int dim, double lambda, double r) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rescaling needs lambda > 0");
  return std::pow(lambda, -(dim - 2.0) / 2.0) * ground_state(dim, r / lambda);
}

double rescaled_ground_state_dr(int dim, double lambda, double r) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rescaling needs lambda > 0");
  return std::pow(lambda, -dim / 2.0) * ground_state_dr(dim, r / lambda);
}

RadialField ground_state_field(const RadialGrid& grid, double lambda) {
  const int d = grid.dim();
  return sample(grid, [&](double r) { return rescaled_ground_state(d, lambda, r); });
}

double GroundStateConstants::grad_norm() const { return std::sqrt(grad_norm_sq); }

GroundStateConstants ground_state_constants(int dim, const GroundStatePolicy& policy) {
  require_dim(dim);
  const RadialGrid grid(dim, policy.r_max, policy.cells);
  const double two_star = sobolev_exponent(dim);

  const auto grad = integrate_with_tail(grid, [dim](double r) {
    const double g = ground_state_dr(dim, r);
    return g * g;
  });
  const auto pot = integrate_with_tail(grid, [dim, two_star](double r) {
    return std::pow(ground_state(dim, r), two_star);
  });

  GroundStateConstants c{};
  c.dim = dim;
  c.grad_norm_sq = grad.interior + grad.tail;
  c.l2star_pow = pot.interior + pot.tail;
  c.energy_E1 = c.grad_norm_sq / 2.0 - c.l2star_pow / two_star;
  c.sobolev_C = std::pow(c.l2star_pow, 1.0 / two_star) / std::sqrt(c.grad_norm_sq);
  c.truncation_error_bound = std::max(grad.tail, pot.tail);
  c.quadrature_error = grad.interior_error + grad.tail_error + pot.interior_error + pot.tail_error;
  return c;
}

const GroundStateConstants& cached_ground_state_constants(int dim) {
  require_dim(dim);
  static const std::array<GroundStateConstants, 3> table = {
      ground_state_constants(3), ground_state_constants(4), ground_state_constants(5)};
  return table[static_cast<std::size_t>(dim - 3)];
}

void to_json(nlohmann::json& j, const GroundStateConstants& c) {
  j = {{"schema", 1},
       {"d", c.dim},
       {"grad_norm_sq", c.grad_norm_sq},
       {"l2star_pow", c.l2star_pow},
       {"energy_E1", c.energy_E1},
       {"sobolev_C", c.sobolev_C},
       {"truncation_error_bound", c.truncation_error_bound},
       {"quadrature_error", c.quadrature_error}};
}

StationarityResidual stationarity_residual(const RadialField& w) {
  const auto lap = radial_laplacian(w);
  const double p = critical_power(w.grid.dim());
  StationarityResidual res{0.0, 0.0};
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    const double v = w.values[i];
    const double nonlinear = std::pow(std::abs(v), p - 1.0) * v;
    const double err = std::abs(-lap.values[i] - nonlinear);
    if (err > res.sup) res = {err, w.grid.r(i)};
  }
  return res;
}

StationarityResidual stationarity_residual(const RadialGrid& grid) {
  return stationarity_residual(ground_state_field(grid));
}

}  // namespace critwave

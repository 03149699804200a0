#include "critwave/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace critwave {

namespace {

double unit_sphere_area(int dim) {
  // 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

std::vector<double> simpson_weights(int cells, double dr) {
  std::vector<double> w(static_cast<std::size_t>(cells) + 1, 0.0);
  const int simpson_cells = (cells % 2 == 0) ? cells : cells - 3;
  for (int i = 0; i < simpson_cells; i += 2) {
    w[i] += dr / 3.0;
    w[i + 1] += 4.0 * dr / 3.0;
    w[i + 2] += dr / 3.0;
  }
  if (simpson_cells != cells) {
    const int k = simpson_cells;
    w[k] += 3.0 * dr / 8.0;
    w[k + 1] += 9.0 * dr / 8.0;
    w[k + 2] += 9.0 * dr / 8.0;
    w[k + 3] += 3.0 * dr / 8.0;
  }
  return w;
}

}  // namespace

RadialGrid::RadialGrid(int dim, double r_max, int cells)
    : dim_(dim), r_max_(r_max), cells_(cells) {
  if (dim < 3 || dim > 5) {
    throw std::invalid_argument("unsupported dimension " + std::to_string(dim) +
                                " (expected 3, 4 or 5)");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("non-positive radius");
  }
  if (cells < 8) {
    throw std::invalid_argument("grid needs at least 8 cells, got " + std::to_string(cells));
  }
  dr_ = r_max / cells;
  sphere_area_ = unit_sphere_area(dim);

  auto line = simpson_weights(cells, dr_);
  std::vector<double> volume(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    volume[i] = line[i] * sphere_area_ * std::pow(r(i), dim - 1);
  }
  line_weights_ = std::make_shared<const std::vector<double>>(std::move(line));
  volume_weights_ = std::make_shared<const std::vector<double>>(std::move(volume));
}

RadialGrid RadialGrid::coarsened() const {
  if (!can_coarsen()) throw std::logic_error("grid cannot be coarsened");
  return RadialGrid(dim_, r_max_, cells_ / 2);
}

RadialGrid make_grid(int dim, double r_max, int cells) { return RadialGrid(dim, r_max, cells); }

RadialField::RadialField(RadialGrid g, std::vector<double> v, bool is_even)
    : grid(std::move(g)), values(std::move(v)), even(is_even) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("field length does not match grid node count");
  }
}

bool RadialField::is_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

RadialField restrict_to_coarse(const RadialField& f) {
  RadialField out(f.grid.coarsened());
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f.values[2 * i];
  out.even = f.even;
  return out;
}

double integrate(const RadialGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrand length mismatch");
  const auto w = grid.volume_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

double integrate(const RadialField& f) { return integrate(f.grid, f.values); }

double integrate_exterior(const RadialGrid& grid, std::span<const double> values, double radius) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrand length mismatch");
  const std::size_t n = grid.size() - 1;
  std::size_t start = radius <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(radius / grid.dr() - 1e-12));
  if (start >= n) return 0.0;
  const int dm1 = grid.dim() - 1;
  double sum = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double a = values[i] * std::pow(grid.r(i), dm1);
    const double b = values[i + 1] * std::pow(grid.r(i + 1), dm1);
    sum += 0.5 * (a + b) * grid.dr();
  }
  return grid.sphere_area() * sum;
}

RadialField radial_derivative(const RadialField& f) {
  const auto& v = f.values;
  const std::size_t n = v.size() - 1;
  const double h = f.grid.dr();
  RadialField out(f.grid);
  out.even = false;
  for (std::size_t i = 1; i < n; ++i) out.values[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  out.values[0] = f.even ? 0.0 : (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  out.values[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  return out;
}

RadialField radial_laplacian(const RadialField& f) {
  const auto& v = f.values;
  const std::size_t n = v.size() - 1;
  const double h = f.grid.dr();
  const double dm1 = f.grid.dim() - 1;
  RadialField out(f.grid);
  for (std::size_t i = 1; i < n; ++i) {
    const double second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double first = (v[i + 1] - v[i - 1]) / (2.0 * h);
    out.values[i] = second + dm1 * first / f.grid.r(i);
  }
  out.values[0] = f.grid.dim() * 2.0 * (v[1] - v[0]) / (h * h);
  const double second = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / (h * h);
  const double first = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  out.values[n] = second + dm1 * first / f.grid.r(n);
  return out;
}

double lp_norm(const RadialField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  std::vector<double> pw(f.size());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(std::max(0.0, integrate(f.grid, pw)), 1.0 / p);
}

double h1_seminorm(const RadialField& f) {
  const auto df = radial_derivative(f);
  std::vector<double> sq(df.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = df.values[i] * df.values[i];
  return std::sqrt(std::max(0.0, integrate(f.grid, sq)));
}

double pair_h_norm(const RadialField& f, const RadialField& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("fields live on different grids");
  const double a = h1_seminorm(f);
  const double b = lp_norm(g, 2.0);
  return std::sqrt(a * a + b * b);
}

Norms norms(const RadialField& f, const RadialField& g, double p) {
  return {lp_norm(f, p), h1_seminorm(f), pair_h_norm(f, g)};
}

double harmonic_gradient_tail(const RadialField& f) {
  const int d = f.grid.dim();
  const double edge = f.values.back();
  return f.grid.sphere_area() * (d - 2) * edge * edge * std::pow(f.grid.r_max(), d - 2);
}

double support_radius(const RadialField& f, double rel_threshold) {
  double peak = 0.0;
  for (double v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (std::abs(f.values[i]) > rel_threshold * peak) return f.grid.r(i);
  }
  return 0.0;
}

}  // namespace critwave

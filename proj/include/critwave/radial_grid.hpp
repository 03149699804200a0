#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace critwave {

/// Uniform grid r_i = i*dr, i = 0..n, on [0, r_max] for radial functions on R^d.
///
/// Carries composite Simpson weights against the measure w_{d-1} r^{d-1} dr
/// (Simpson 3/8 closes the last three cells when n is odd). Copies share the
/// weight tables.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, int cells);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  int cells() const { return cells_; }
  double dr() const { return dr_; }
  std::size_t size() const { return static_cast<std::size_t>(cells_) + 1; }

  double r(std::size_t i) const {
    return i == static_cast<std::size_t>(cells_) ? r_max_ : static_cast<double>(i) * dr_;
  }

  /// Surface area of the unit sphere S^{d-1} (4*pi for d = 3).
  double sphere_area() const { return sphere_area_; }

  /// Plain 1-D Simpson weights on the node set (no radial measure).
  std::span<const double> line_weights() const { return *line_weights_; }
  /// line_weights * sphere_area * r^{d-1}.
  std::span<const double> volume_weights() const { return *volume_weights_; }

  /// Same dimension and radius with half the cells (requires an even cell count >= 16).
  bool can_coarsen() const { return cells_ % 2 == 0 && cells_ / 2 >= 8; }
  RadialGrid coarsened() const;
  RadialGrid refined() const { return RadialGrid(dim_, r_max_, 2 * cells_); }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.dim_ == b.dim_ && a.cells_ == b.cells_ && a.r_max_ == b.r_max_;
  }

 private:
  int dim_;
  double r_max_;
  int cells_;
  double dr_;
  double sphere_area_;
  std::shared_ptr<const std::vector<double>> line_weights_;
  std::shared_ptr<const std::vector<double>> volume_weights_;
};

RadialGrid make_grid(int dim, double r_max, int cells);

/// Samples of a radial function on a RadialGrid.
struct RadialField {
  RadialGrid grid;
  std::vector<double> values;
  /// Smooth even extension through the origin (u'(0) = 0). Set for all
  /// physical fields; cleared for fields like w = r*u.
  bool even = true;

  explicit RadialField(RadialGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
  RadialField(RadialGrid g, std::vector<double> v, bool is_even = true);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double r(std::size_t i) const { return grid.r(i); }

  bool is_finite() const;
};

template <class Fn>
RadialField sample(const RadialGrid& grid, Fn&& fn) {
  RadialField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = fn(grid.r(i));
  return f;
}

/// Restriction to the coarsened grid (every other node).
RadialField restrict_to_coarse(const RadialField& f);

/// w_{d-1} * int_0^{r_max} f(r) r^{d-1} dr.
double integrate(const RadialField& f);
double integrate(const RadialGrid& grid, std::span<const double> values);

/// Exterior integral over [R, r_max] by the trapezoid rule starting at the
/// first node >= R. Nested in R, so nonincreasing for nonnegative integrands.
double integrate_exterior(const RadialGrid& grid, std::span<const double> values, double radius);

/// Second-order centered differences; one-sided second order at both ends,
/// with f'(0) = 0 imposed on even fields.
RadialField radial_derivative(const RadialField& f);

/// f'' + (d-1) f'/r with centered differences; d * f''(0) at the origin for
/// even fields. Boundary node r_max uses one-sided stencils.
RadialField radial_laplacian(const RadialField& f);

double lp_norm(const RadialField& f, double p);
double h1_seminorm(const RadialField& f);
/// (||f||_{H^1 dot}^2 + ||g||_{L^2}^2)^{1/2}.
double pair_h_norm(const RadialField& f, const RadialField& g);

struct Norms {
  double lp;
  double h1_seminorm;
  double pair_h_norm;
};
Norms norms(const RadialField& f, const RadialField& g, double p);

/// Estimate of int_{|x| > r_max} |grad f|^2 dx assuming f decays like the
/// harmonic profile c r^{-(d-2)} beyond the grid:
/// w_{d-1} (d-2) f(r_max)^2 r_max^{d-2}.
double harmonic_gradient_tail(const RadialField& f);

/// Largest radius where |f| exceeds rel_threshold * max|f| (0 for a zero field).
double support_radius(const RadialField& f, double rel_threshold = 1e-14);

}  // namespace critwave

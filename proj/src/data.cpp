#include "critwave/data.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "critwave/functionals.hpp"
#include "critwave/ground_state.hpp"

namespace critwave {

WaveState scaled_ground_state(const RadialGrid& grid, double a, double lambda, double truncation_radius) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (truncation_radius < 0.0) throw std::invalid_argument("truncation radius must be nonnegative");
  const int d = grid.dim();
  auto u = sample(grid, [&](double r) {
    const double chi = truncation_radius > 0.0 ? cutoff(r, truncation_radius).value : 1.0;
    return chi == 0.0 ? 0.0 : a * chi * rescaled_ground_state(d, lambda, r);
  });
  return WaveState(std::move(u), RadialField(grid));
}

double scaled_ground_state_support(double truncation_radius) {
  return truncation_radius > 0.0 ? 2.0 * truncation_radius : std::numeric_limits<double>::infinity();
}

WaveState gaussian_bump(const RadialGrid& grid, double amplitude, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
  if (center < 0.0) throw std::invalid_argument("center must be nonnegative");
  const double edge = gaussian_bump_support(center, width);
  auto u = sample(grid, [&](double r) {
    if (r > edge) return 0.0;
    const double z = (r - center) / width;
    return amplitude * std::exp(-z * z);
  });
  return WaveState(std::move(u), RadialField(grid));
}

double gaussian_bump_support(double center, double width) { return center + 6.0 * width; }

}  // namespace critwave

#pragma once

#include <nlohmann/json.hpp>

#include "critwave/radial_grid.hpp"

namespace critwave {

/// Energy-critical exponent p_c = 1 + 4/(d-2).
constexpr double critical_power(int dim) { return 1.0 + 4.0 / (dim - 2.0); }
/// Sobolev exponent 2* = 2d/(d-2).
constexpr double sobolev_exponent(int dim) { return 2.0 * dim / (dim - 2.0); }

/// W(r) = (1 + r^2 / (d(d-2)))^{-(d-2)/2}, the explicit static solution of
/// -Laplace W = W^{p_c}.
double ground_state(int dim, double r);
double ground_state_dr(int dim, double r);

/// lambda^{-(d-2)/2} W(r / lambda).
double rescaled_ground_state(int dim, double lambda, double r);
double rescaled_ground_state_dr(int dim, double lambda, double r);

RadialField ground_state_field(const RadialGrid& grid, double lambda = 1.0);

struct GroundStatePolicy {
  double r_max = 1e4;
  int cells = 250'000;
};

struct GroundStateConstants {
  int dim;
  double grad_norm_sq;   ///< ||grad W||^2_{L^2}
  double l2star_pow;     ///< ||W||^{2*}_{L^{2*}}
  double energy_E1;      ///< E_1(W, 0) = grad_norm_sq / d
  double sobolev_C;      ///< sharp constant: ||W||_{L^{2*}} / ||grad W||_{L^2}
  /// Size of the exterior contributions beyond r_max that were added back.
  double truncation_error_bound;
  /// Residual error estimate after tail correction (Richardson on the
  /// interior quadrature plus the spread of the tail quadrature).
  double quadrature_error;
  double grad_norm() const;
};

GroundStateConstants ground_state_constants(int dim, const GroundStatePolicy& policy = {});

/// Memoized ground_state_constants(dim) at the default policy.
const GroundStateConstants& cached_ground_state_constants(int dim);

void to_json(nlohmann::json& j, const GroundStateConstants& c);

struct StationarityResidual {
  double sup;
  double r_at;
};

/// sup over interior nodes of |-(discrete radial Laplacian of w) - |w|^{p_c-1} w|.
StationarityResidual stationarity_residual(const RadialField& w);
/// Same with w = W sampled on grid.
StationarityResidual stationarity_residual(const RadialGrid& grid);

}  // namespace critwave

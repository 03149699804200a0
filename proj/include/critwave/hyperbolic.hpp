#pragma once

#include <vector>

#include "critwave/classifier.hpp"
#include "critwave/evolution.hpp"
#include "critwave/radial_grid.hpp"

namespace critwave {

/// Radial function on hyperbolic space H^3; r is geodesic distance and the
/// measure is 4 pi sinh^2 r dr. The grid must be three-dimensional.
struct H3Field {
  RadialGrid grid;
  std::vector<double> values;

  explicit H3Field(RadialGrid g);
  H3Field(RadialGrid g, std::vector<double> v);
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// sinh(r) / r with the limit 1 at the origin.
double sinh_ratio(double r);

/// (T f)(r) = (sinh r / r) f(r).
RadialField T_forward(const H3Field& f);
/// Multiplies by r / sinh r.
H3Field T_inverse(const RadialField& g);

double h3_integrate(const H3Field& f);
double h3_l2_norm(const H3Field& f);
double h3_lp_norm(const H3Field& f, double p);

struct H01Norm {
  double gradient;  ///< int |f'|^2 dmu
  double mass;      ///< int |f|^2 dmu
  double norm_sq() const { return gradient - mass; }
};
/// Both terms of ||f||^2 = int (|grad f|^2 - |f|^2) dmu, reported separately.
H01Norm h3_h01_norm(const H3Field& f);

/// f'' + 2 coth(r) f' (3 f''(0) at the origin).
H3Field h3_laplacian(const H3Field& f);

/// sup over interior nodes of |-Lap_R3(T f) - T[(-Lap_H3 - 1) f]|.
double intertwining_residual(const H3Field& f);

/// (1/2) ||v||^2_{H^{0,1}} + (1/2) ||v_t||^2_{L^2} - (1/6) ||v||^6_{L^6}.
double h3_energy(const H3Field& v, const H3Field& v_t);

/// Coefficient of the transformed equation: (r / sinh r)^4.
CoefficientSpec h3_coefficient();

/// (A exp(-(r/w)^2), 0) on H^3, zero beyond 6 w.
std::pair<H3Field, H3Field> h3_family(const RadialGrid& grid, double amplitude, double width);

struct H3Run {
  RunTrace trace;  ///< Euclidean trace of T v
  std::vector<double> t;
  std::vector<double> energy;  ///< h3_energy of the pulled-back samples
  H3Field v_final;
  H3Field v_t_final;
};

/// Evolves T v with coefficient (r/sinh r)^4, zeta = +1, and pulls each
/// diagnostics sample back by T_inverse. Coefficient and sign in `config`
/// are overridden.
H3Run h3_solve(const H3Field& v0, const H3Field& v1, SolverConfig config);

/// predict_focusing on the transformed datum.
Prediction h3_predict(const H3Field& v0, const H3Field& v1, const GroundStateConstants& ground);

}  // namespace critwave

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "critwave/coefficients.hpp"
#include "critwave/types.hpp"

namespace critwave {

struct SolverConfig {
  /// dt / dr; the step is shortened slightly so that t_final is hit exactly.
  double cfl = 0.5;
  double t_final = 1.0;
  int zeta = 1;
  CoefficientSpec coefficient = CoefficientSpec::constant(1.0);
  double blowup_sup_cap = 1e6;
  /// Multiple of ||grad W|| at which the H-norm cap fires.
  double blowup_h_cap = 10.0;
  /// Diagnostics row every `cadence` steps (plus the first and last step).
  int cadence = 10;
  /// Cutoff radius for G_R, y_R and kappa(R); 0 selects r_max / 2.
  double cutoff_radius = 0.0;
  /// Drop the nonlinearity (free wave equation).
  bool linear = false;
  /// Require r_max >= support + t_final + 2 dr.
  bool enforce_domain = true;

  /// 1 for linear runs, 0.9 otherwise.
  double cfl_limit() const { return linear ? 1.0 : 0.9; }
  double step(const RadialGrid& grid) const;
  int steps(const RadialGrid& grid) const;
  /// Throws std::invalid_argument on a bad configuration for this grid.
  void validate(const RadialGrid& grid) const;
};

/// Largest dt/dr for which the linear part of the scheme is stable
/// (Gershgorin bound on the symmetrized discrete Laplacian).
double stability_cfl(const RadialGrid& grid);

using DiagnosticHook = std::function<void(const WaveState&)>;

/// Stormer-Verlet integration of u_tt = L u + zeta phi |u|^{p_c - 1} u.
///
/// d = 3 evolves w = r u with the exact 1-D stencil; d = 4, 5 use a
/// conservative finite-volume radial Laplacian. The outer node is held at its
/// initial value. Hooks run on every diagnostics sample.
RunTrace evolve(const WaveState& initial, const SolverConfig& config,
                std::span<const DiagnosticHook> hooks = {});

/// Final state of evolve(); convenient when only the endpoint matters.
WaveState evolve_state(const WaveState& initial, const SolverConfig& config);

/// Free wave equation to t_final.
WaveState evolve_linear(const WaveState& initial, double t_final, double cfl = 1.0);

/// Semi-discrete Hamiltonian of the scheme, conserved up to O(dt^2) by the
/// integrator. Agrees with energy() to O(dr^2).
double scheme_energy(const WaveState& state, const CoefficientSpec& spec, int zeta);

struct DecayFit {
  std::vector<double> t;
  std::vector<double> l2star;
  std::vector<double> sup;
  double slope_l2star;
  double slope_sup;
  double fit_from;  ///< start of the fitted range (last decade of t)
};

/// Free evolution sampled at increasing t_samples; least-squares log-log
/// slopes of ||u||_{L^{2*}} and ||u||_{L^inf} over the last decade.
DecayFit free_decay_test(const WaveState& initial, std::span<const double> t_samples, double cfl = 1.0);

/// (c^{(d-2)/4} u, c^{(d-2)/4} u_t).
WaveState rescale_constant_coefficient(const WaveState& state, double c);

/// support_radius + t_final + 2 dr.
double required_domain_radius(double support_radius, double t_final, double dr);

/// Largest support radius of u and u_t.
double state_support_radius(const WaveState& state);

using DataBuilder = std::function<WaveState(const RadialGrid&)>;

struct RefinedRun {
  RunTrace coarse;
  RunTrace fine;
  /// BlewUp only if both resolutions hit a cap within 5% of the same time;
  /// Dispersed only if both disperse; otherwise Undecided.
  Outcome outcome;
};

RefinedRun evolve_refined(const DataBuilder& data, const RadialGrid& grid, const SolverConfig& config);

}  // namespace critwave

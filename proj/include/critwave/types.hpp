#pragma once

#include <string>
#include <vector>

#include "critwave/coefficients.hpp"
#include "critwave/radial_grid.hpp"

namespace critwave {

/// (u, u_t) at time t on a shared grid.
struct WaveState {
  RadialField u;
  RadialField u_t;
  double t = 0.0;
  bool blown_up = false;

  WaveState(RadialField displacement, RadialField velocity, double time = 0.0);
  static WaveState zero(const RadialGrid& grid);

  const RadialGrid& grid() const { return u.grid; }
  bool is_finite() const { return u.is_finite() && u_t.is_finite(); }
  bool is_zero() const;
};

enum class OutcomeKind { Dispersed, BlewUp, Undecided };
std::string to_string(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Undecided;
  double t_event = 0.0;
  /// int phi |u|^{2*} / E at the final time (infinite when E <= 0).
  double final_potential_fraction = 0.0;
  /// Sup-norm nonincreasing over the final 20% of recorded rows.
  bool sup_tail_monotone = false;
  /// Cap hit at two resolutions with times within 5%.
  bool refinement_consistent = false;
  bool nan_detected = false;
  std::string note;
};

/// One diagnostics sample; CSV column order follows declaration order.
struct TraceRow {
  double t;
  double E_total;
  double E_kinetic;
  double E_gradient;
  double E_potential;
  double sup_norm;
  double h_norm;
  double y_norm_accum;
  double morawetz_accum;
  double G_R;
  double y_R;
  double y_R_dot;
  double kappa_R;
};

struct RunTrace {
  int dim = 3;
  int zeta = 1;
  CoefficientSpec coefficient = CoefficientSpec::constant(1.0);
  double cutoff_radius = 0.0;
  double dt = 0.0;
  double cfl = 0.0;
  int cells = 0;
  double r_max = 0.0;
  double initial_energy = 0.0;
  bool domain_sufficient = true;
  std::vector<TraceRow> rows;
  Outcome outcome;
};

}  // namespace critwave

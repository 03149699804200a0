#pragma once

#include <iosfwd>
#include <span>

#include "critwave/coefficients.hpp"
#include "critwave/ground_state.hpp"
#include "critwave/types.hpp"

namespace critwave {

// ---------------------------------------------------------------------------
// Cutoff phi_R: 1 on [0, R], 0 beyond 2R, quintic smoothstep (C^2) between.

struct CutoffValue {
  double value;
  double d_dr;
};
CutoffValue cutoff(double r, double R);
RadialField cutoff_field(const RadialGrid& grid, double R);

// ---------------------------------------------------------------------------
// Energy

struct EnergyParts {
  double total;
  double kinetic;    ///< (1/2) int u_t^2
  double gradient;   ///< (1/2) int |grad u|^2
  double potential;  ///< (1/2*) int phi |u|^{2*}, unsigned
};

/// E = kinetic + gradient - zeta * potential.
EnergyParts energy(const WaveState& state, const CoefficientSpec& spec, int zeta);

// ---------------------------------------------------------------------------
// Energy trapping below the ground state

struct TrappingReport {
  double delta;
  bool hypotheses_hold;  ///< ||grad u|| < ||grad W|| and E < (1 - delta) E_1
  double h_norm;
  double h_bound;        ///< (1 - 2 delta / d)^{1/2} ||grad W||
  bool h_bound_holds;
  double lower_constant; ///< c = 1 - (1 - 2 delta / d)^{(2* - 2)/2}
  double ratio_gradient; ///< int(|grad u|^2 - |u|^{2*}) / int |grad u|^2, in [c, 1]
  double ratio_energy;   ///< (int u_t^2 + int(|grad u|^2 - |u|^{2*})) / E, in [2c, d]
  bool gradient_ratio_holds;
  bool energy_ratio_holds;
  bool all_hold() const { return h_bound_holds && gradient_ratio_holds && energy_ratio_holds; }
};

TrappingReport trapping_check(const WaveState& state, const CoefficientSpec& spec, double delta,
                              const GroundStateConstants& ground);

/// A delta with E < (1 - delta) E_1: half the relative gap, capped below 1.
double admissible_delta(double energy, double energy_E1);

// ---------------------------------------------------------------------------
// Space-time norms and the Morawetz accumulator

enum class YNorm { plain, weighted };

/// ||phi^{1/p_c} u(t)||^{p_c}_{L^{2 p_c}} (weighted) or ||u(t)||^{p_c}_{L^{2 p_c}}.
double y_norm_density(const RadialField& u, const CoefficientSpec& spec, YNorm variant);

/// (sum_k dt ||u(t_k)||^{p_c}_{L^{2p_c}})^{1/p_c} over a uniformly sampled window.
double y_norm_accumulate(std::span<const WaveState> window, const CoefficientSpec& spec,
                         YNorm variant = YNorm::weighted);

/// int eta |u|^{2*} / |x| dx.
double morawetz_density(const RadialField& u, const RadialField& eta);

struct MorawetzResult {
  double lhs;
  double bound;  ///< 2d/(d-1) E(u_0, u_1)
  double margin() const { return bound - lhs; }
};

/// Reads the accumulated integral from a defocusing trace; focusing traces are rejected.
MorawetzResult morawetz_accumulate(const RunTrace& trace);

// ---------------------------------------------------------------------------
// Virial functionals

struct VirialG {
  double G;            ///< int (x . grad u) u_t phi_R + (d/2) int phi_R u u_t
  double G_dot_predicted;
  double H;            ///< int phi_R u u_t
  double H_dot_predicted;
  double kappa;        ///< tail_kappa(state, R)
  double scale;        ///< int (u_t^2 + |grad u|^2 + phi |u|^{2*}), the size of each term
};

/// Predictions drop the exterior terms; kappa is reported alongside.
VirialG virial_G_R(const WaveState& state, const CoefficientSpec& spec, double R, int zeta = 1);

struct VirialY {
  double y;
  double y_dot;
  double y_ddot_predicted;
  double scale;
};

VirialY blowup_y_R(const WaveState& state, const CoefficientSpec& spec, double R, int zeta = 1);

/// int_{|x| > R} (u_t^2 + |grad u|^2 + u^2/|x|^2 + |u|^{2*}) dx at one instant.
double tail_kappa(const WaveState& state, double R);

/// int |f|^2/|x|^2 dx / ||f||^2_{H^1 dot} (Hardy ratio; 4/(d-2)^2 is sharp).
double hardy_ratio(const RadialField& f);

// ---------------------------------------------------------------------------
// Trace rows and CSV

struct RowContext {
  const CoefficientSpec* spec;
  int zeta;
  double cutoff_radius;
  double y_norm_accum;
  double morawetz_accum;
};

TraceRow diagnostics_row(const WaveState& state, const RowContext& ctx);

extern const char* const kTraceColumns[13];

void write_trace_csv(const RunTrace& trace, std::ostream& os);

}  // namespace critwave

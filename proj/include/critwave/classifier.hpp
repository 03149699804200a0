#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "critwave/coefficients.hpp"
#include "critwave/ground_state.hpp"
#include "critwave/types.hpp"

namespace critwave {

enum class Verdict { Scatter, BlowUp, Indeterminate };
std::string to_string(Verdict v);

enum class TheoremId { focusing_threshold, defocusing_scattering, constant_coefficient, hyperbolic_threshold };
std::string to_string(TheoremId id);

struct Prediction {
  Verdict verdict = Verdict::Indeterminate;
  TheoremId theorem = TheoremId::focusing_threshold;
  double energy = 0.0;
  double energy_threshold = 0.0;
  /// energy_threshold - energy
  double energy_gap = 0.0;
  double grad_norm = 0.0;
  double grad_threshold = 0.0;
  /// grad_threshold - grad_norm
  double norm_gap = 0.0;
  double energy_tolerance = 0.0;
  double norm_tolerance = 0.0;
  std::string reason;
};

void to_json(nlohmann::json& j, const Prediction& p);

/// Threshold dichotomy below the ground-state energy.
///
/// Indeterminate when the energy is not below E_1(W,0) by more than the
/// margin band, when ||grad u_0|| is within the band of ||grad W||, or when
/// the coefficient fails the focusing condition. The band is three times the
/// estimated quadrature error (grid-halving Richardson estimate plus the
/// harmonic tail beyond r_max) plus the error of the ground-state constants.
Prediction predict_focusing(const WaveState& data, const CoefficientSpec& spec, const GroundStateConstants& ground);

/// Scatter whenever the coefficient satisfies the defocusing condition.
Prediction predict_defocusing(const WaveState& data, const CoefficientSpec& spec);

/// Constant coefficient 0 < c <= 1 with thresholds c^{-(d-2)/2} E_1 and
/// c^{-(d-2)/4} ||grad W||.
Prediction predict_constant_c(const WaveState& data, double c, const GroundStateConstants& ground);

enum class Agreement { Consistent, Inconsistent, Untested };
std::string to_string(Agreement a);

struct Comparison {
  Agreement agreement;
  Verdict predicted;
  OutcomeKind observed;
  std::string detail;
};

Comparison compare(const Prediction& prediction, const Outcome& outcome);

}  // namespace critwave

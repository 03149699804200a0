#include "critwave/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "critwave/functionals.hpp"

namespace critwave {

namespace {

struct Estimate {
  double energy;
  double grad_norm;
  double energy_error;
  double grad_error;
};

WaveState coarse_copy(const WaveState& s) {
  return WaveState(restrict_to_coarse(s.u), restrict_to_coarse(s.u_t), s.t);
}

Estimate estimate(const WaveState& data, const CoefficientSpec& spec, int zeta) {
  const auto e = energy(data, spec, zeta);
  Estimate est{e.total, std::sqrt(2.0 * e.gradient), 0.0, 0.0};
  if (data.grid().can_coarsen()) {
    const auto c = energy(coarse_copy(data), spec, zeta);
    // Centered differences make the gradient term second order in dr.
    est.energy_error = std::abs(e.total - c.total) / 3.0;
    est.grad_error = std::abs(est.grad_norm - std::sqrt(2.0 * c.gradient)) / 3.0;
  }
  const double tail = harmonic_gradient_tail(data.u);
  est.energy_error += 0.5 * tail;
  est.grad_error += std::sqrt(est.grad_norm * est.grad_norm + tail) - est.grad_norm;
  return est;
}

Prediction threshold_decision(const Estimate& est, double e_threshold, double g_threshold, double ground_error,
                              TheoremId theorem) {
  Prediction p;
  p.theorem = theorem;
  p.energy = est.energy;
  p.energy_threshold = e_threshold;
  p.energy_gap = e_threshold - est.energy;
  p.grad_norm = est.grad_norm;
  p.grad_threshold = g_threshold;
  p.norm_gap = g_threshold - est.grad_norm;
  p.energy_tolerance = 3.0 * (est.energy_error + ground_error);
  p.norm_tolerance = 3.0 * (est.grad_error + ground_error);
  if (!(p.energy_gap > p.energy_tolerance)) {
    p.reason = "energy not below the ground-state threshold";
    return p;
  }
  if (p.norm_gap > p.norm_tolerance) {
    p.verdict = Verdict::Scatter;
    p.reason = "gradient norm below the ground state";
  } else if (-p.norm_gap > p.norm_tolerance) {
    p.verdict = Verdict::BlowUp;
    p.reason = "gradient norm above the ground state";
  } else {
    p.reason = "gradient norm within the margin band";
  }
  return p;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Scatter: return "Scatter";
    case Verdict::BlowUp: return "BlowUp";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::focusing_threshold: return "focusing_threshold";
    case TheoremId::defocusing_scattering: return "defocusing_scattering";
    case TheoremId::constant_coefficient: return "constant_coefficient";
    case TheoremId::hyperbolic_threshold: return "hyperbolic_threshold";
  }
  return "focusing_threshold";
}

std::string to_string(Agreement a) {
  switch (a) {
    case Agreement::Consistent: return "Consistent";
    case Agreement::Inconsistent: return "Inconsistent";
    case Agreement::Untested: return "Untested";
  }
  return "Untested";
}

void to_json(nlohmann::json& j, const Prediction& p) {
  j = {{"verdict", to_string(p.verdict)},
       {"theorem", to_string(p.theorem)},
       {"energy", p.energy},
       {"energy_threshold", p.energy_threshold},
       {"energy_gap", p.energy_gap},
       {"grad_norm", p.grad_norm},
       {"grad_threshold", p.grad_threshold},
       {"norm_gap", p.norm_gap},
       {"energy_tolerance", p.energy_tolerance},
       {"norm_tolerance", p.norm_tolerance},
       {"reason", p.reason}};
}

Prediction predict_focusing(const WaveState& data, const CoefficientSpec& spec, const GroundStateConstants& ground) {
  const int d = data.grid().dim();
  if (d != ground.dim) throw std::invalid_argument("ground-state constants for another dimension");
  const auto est = estimate(data, spec, +1);
  if (!check_focusing_condition(spec, condition_scan_grid(d)).pass) {
    Prediction p = threshold_decision(est, ground.energy_E1, ground.grad_norm(), ground.quadrature_error,
                                      TheoremId::focusing_threshold);
    p.verdict = Verdict::Indeterminate;
    p.reason = "hypothesis not satisfied";
    return p;
  }
  return threshold_decision(est, ground.energy_E1, ground.grad_norm(), ground.quadrature_error,
                            TheoremId::focusing_threshold);
}

Prediction predict_defocusing(const WaveState& data, const CoefficientSpec& spec) {
  const int d = data.grid().dim();
  const auto est = estimate(data, spec, -1);
  Prediction p;
  p.theorem = TheoremId::defocusing_scattering;
  p.energy = est.energy;
  p.grad_norm = est.grad_norm;
  p.energy_tolerance = 3.0 * est.energy_error;
  p.norm_tolerance = 3.0 * est.grad_error;
  if (check_defocusing_condition(spec, condition_scan_grid(d)).pass) {
    p.verdict = Verdict::Scatter;
    p.reason = "defocusing condition holds";
  } else {
    p.reason = "hypothesis not satisfied";
  }
  return p;
}

Prediction predict_constant_c(const WaveState& data, double c, const GroundStateConstants& ground) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in (0, 1]");
  const int d = data.grid().dim();
  if (d != ground.dim) throw std::invalid_argument("ground-state constants for another dimension");
  const auto est = estimate(data, CoefficientSpec::constant(c), +1);
  const double e_scale = std::pow(c, -(d - 2.0) / 2.0);
  const double g_scale = std::pow(c, -(d - 2.0) / 4.0);
  auto p = threshold_decision(est, e_scale * ground.energy_E1, g_scale * ground.grad_norm(), 0.0,
                              TheoremId::constant_coefficient);
  p.energy_tolerance += 3.0 * e_scale * ground.quadrature_error;
  p.norm_tolerance += 3.0 * g_scale * ground.quadrature_error;
  if (p.verdict != Verdict::Indeterminate &&
      (!(p.energy_gap > p.energy_tolerance) || !(std::abs(p.norm_gap) > p.norm_tolerance))) {
    p.verdict = Verdict::Indeterminate;
    p.reason = "within the margin band";
  }
  return p;
}

Comparison compare(const Prediction& prediction, const Outcome& outcome) {
  Comparison c{Agreement::Untested, prediction.verdict, outcome.kind, ""};
  if (prediction.verdict == Verdict::Indeterminate || outcome.kind == OutcomeKind::Undecided) {
    c.detail = prediction.verdict == Verdict::Indeterminate ? "no prediction: " + prediction.reason
                                                            : "no observation: " + outcome.note;
    return c;
  }
  const bool match = (prediction.verdict == Verdict::Scatter && outcome.kind == OutcomeKind::Dispersed) ||
                     (prediction.verdict == Verdict::BlowUp && outcome.kind == OutcomeKind::BlewUp);
  c.agreement = match ? Agreement::Consistent : Agreement::Inconsistent;
  if (!match) {
    c.detail = "predicted " + to_string(prediction.verdict) + " (" + prediction.reason + "; energy " +
               std::to_string(prediction.energy) + ", gradient norm " + std::to_string(prediction.grad_norm) +
               ") but observed " + to_string(outcome.kind) + " at t=" + std::to_string(outcome.t_event) + " (" +
               outcome.note + ")";
  }
  return c;
}

}  // namespace critwave

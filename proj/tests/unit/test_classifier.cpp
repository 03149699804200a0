#include <doctest.h>

#include <cmath>

#include "critwave/classifier.hpp"
#include "critwave/data.hpp"
#include "critwave/evolution.hpp"
#include "critwave/functionals.hpp"
#include "oracles.hpp"

using namespace critwave;

namespace {

const RadialGrid& long_grid() {
  static const RadialGrid g(3, 1e4, 400000);
  return g;
}

WaveState aW(double a) {
  return WaveState(sample(long_grid(), [a](double r) { return a * oracle::W(3, r); }), RadialField(long_grid()));
}

// Independent value of int phi W^6 for phi = (r / sinh r)^2.
double phi_W6() {
  return oracle::sphere(3) * oracle::exp_sinh([](double r) {
           const double s = r / std::sinh(r);
           return (std::isfinite(s) ? s * s : 0.0) * std::pow(oracle::W(3, r), 6) * r * r;
         });
}

}  // namespace

TEST_CASE("focusing predictions along the ray a W") {
  const auto& ground = cached_ground_state_constants(3);
  const auto spec = CoefficientSpec::sinh_power(2.0);
  const double G = oracle::grad_W_sq(3);

  const auto small = predict_focusing(aW(0.3), spec, ground);
  CHECK(small.verdict == Verdict::Scatter);
  CHECK(small.theorem == TheoremId::focusing_threshold);

  // E / G = a^2/2 - a^6/6 * (int phi W^6 / G), independently evaluated.
  const double a = 1.75;
  const double e_over_g = a * a / 2.0 - std::pow(a, 6) / 6.0 * phi_W6() / G;
  REQUIRE(e_over_g < 1.0 / 3.0);
  const auto big = predict_focusing(aW(a), spec, ground);
  const double tail = 0.5 * harmonic_gradient_tail(aW(a).u);
  CHECK((big.energy + tail) / G == doctest::Approx(e_over_g).epsilon(1e-4));
  CHECK(big.verdict == Verdict::BlowUp);

  const auto w = predict_focusing(aW(1.0), CoefficientSpec::constant(1.0), ground);
  CHECK(w.verdict == Verdict::Indeterminate);
}

TEST_CASE("phi W^6 quadrature") {
  CHECK(phi_W6() == doctest::Approx(5.31417482729).epsilon(1e-9));
}

TEST_CASE("prediction is monotone along the ray") {
  const auto& ground = cached_ground_state_constants(3);
  const auto spec = CoefficientSpec::sinh_power(2.0);
  const RadialGrid g(3, 60.0, 4096);
  int phase = 0;  // 0: Scatter, 1: gap, 2: BlowUp
  for (double a = 0.1; a <= 2.5; a += 0.1) {
    const auto p = predict_focusing(scaled_ground_state(g, a, 0.5, 16.0), spec, ground);
    const int now = p.verdict == Verdict::Scatter ? 0 : p.verdict == Verdict::BlowUp ? 2 : 1;
    CHECK(now >= phase);
    phase = std::max(phase, now);
  }
  CHECK(phase == 2);
}

TEST_CASE("prediction is stable under refinement") {
  const auto& ground = cached_ground_state_constants(3);
  const auto spec = CoefficientSpec::sinh_power(2.0);
  for (double a : {0.5, 1.5}) {
    const auto p = predict_focusing(scaled_ground_state(RadialGrid(3, 40.0, 2048), a, 1.0, 16.0), spec, ground);
    const auto q = predict_focusing(scaled_ground_state(RadialGrid(3, 40.0, 4096), a, 1.0, 16.0), spec, ground);
    CHECK(p.verdict == q.verdict);
  }
}

TEST_CASE("focusing prediction refuses coefficients failing the hypothesis") {
  const auto& ground = cached_ground_state_constants(3);
  const auto bump = CoefficientSpec::table({0.0, 1.0, 1.1, 3.0}, {1.0, 1.0, 0.1, 0.1});
  const auto p = predict_focusing(aW(0.3), bump, ground);
  CHECK(p.verdict == Verdict::Indeterminate);
  CHECK(p.reason == "hypothesis not satisfied");
}

TEST_CASE("defocusing predictions") {
  const RadialGrid g(3, 10.0, 200);
  CHECK(predict_defocusing(gaussian_bump(g, 3.0, 0.0, 1.0), CoefficientSpec::gaussian(1.0)).verdict == Verdict::Scatter);
  CHECK(predict_defocusing(WaveState::zero(g), CoefficientSpec::constant(1.0)).verdict == Verdict::Scatter);
  const auto bad = CoefficientSpec::table({0.0, 0.5, 0.999, 1.0, 2.0}, {1.0, 0.5, 0.001, 0.01, 0.01});
  CHECK(predict_defocusing(gaussian_bump(g, 1.0, 0.0, 1.0), bad).verdict == Verdict::Indeterminate);
}

TEST_CASE("constant coefficient thresholds") {
  const auto& ground = cached_ground_state_constants(3);
  const auto data = aW(0.5);
  const auto one = predict_constant_c(data, 1.0, ground);
  const auto ref = predict_focusing(data, CoefficientSpec::constant(1.0), ground);
  CHECK(one.verdict == ref.verdict);
  CHECK(one.energy == doctest::Approx(ref.energy));

  const auto sixteenth = predict_constant_c(data, 1.0 / 16.0, ground);
  CHECK(sixteenth.grad_threshold == doctest::Approx(2.0 * ground.grad_norm()));
  CHECK(sixteenth.energy_threshold == doctest::Approx(4.0 * ground.energy_E1));
  CHECK_THROWS(predict_constant_c(data, 0.0, ground));
  CHECK_THROWS(predict_constant_c(data, 2.0, ground));

  for (double c : {1.0 / 16.0, 0.5}) {
    for (double a : {0.5, 1.5}) {
      const auto u = aW(a);
      const auto p = predict_constant_c(u, c, ground);
      const auto q = predict_focusing(rescale_constant_coefficient(u, c), CoefficientSpec::constant(1.0), ground);
      CHECK(p.verdict == q.verdict);
    }
  }
}

TEST_CASE("compare") {
  Prediction p;
  Outcome o;
  p.verdict = Verdict::Scatter;
  o.kind = OutcomeKind::Dispersed;
  CHECK(compare(p, o).agreement == Agreement::Consistent);
  p.verdict = Verdict::BlowUp;
  o.kind = OutcomeKind::BlewUp;
  CHECK(compare(p, o).agreement == Agreement::Consistent);
  p.verdict = Verdict::Scatter;
  o.kind = OutcomeKind::Undecided;
  CHECK(compare(p, o).agreement == Agreement::Untested);
  o.kind = OutcomeKind::BlewUp;
  const auto bad = compare(p, o);
  CHECK(bad.agreement == Agreement::Inconsistent);
  CHECK_FALSE(bad.detail.empty());
  p.verdict = Verdict::Indeterminate;
  CHECK(compare(p, o).agreement == Agreement::Untested);
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "critwave/data.hpp"
#include "critwave/evolution.hpp"
#include "critwave/functionals.hpp"
#include "critwave/ground_state.hpp"
#include "oracles.hpp"

using namespace critwave;

namespace {

WaveState wide_W(double a) {
  const RadialGrid g(3, 1e4, 400000);
  return WaveState(sample(g, [a](double r) { return a * oracle::W(3, r); }), RadialField(g));
}

}  // namespace

TEST_CASE("cutoff") {
  CHECK(cutoff(0.5, 1.0).value == 1.0);
  CHECK(cutoff(2.5, 1.0).value == 0.0);
  CHECK(cutoff(1.5, 1.0).value == doctest::Approx(0.5));
  const double h = 1e-6;
  CHECK(cutoff(1.3, 1.0).d_dr == doctest::Approx((cutoff(1.3 + h, 1.0).value - cutoff(1.3 - h, 1.0).value) / (2 * h)));
}

TEST_CASE("energy of zero and of W") {
  const RadialGrid small(3, 5.0, 100);
  const auto z = energy(WaveState::zero(small), CoefficientSpec::constant(1.0), 1);
  CHECK(z.total == 0.0);
  CHECK(z.kinetic == 0.0);
  CHECK(z.gradient == 0.0);
  CHECK(z.potential == 0.0);

  const double G = oracle::grad_W_sq(3);
  const auto w = wide_W(1.0);
  const double tail = 0.5 * harmonic_gradient_tail(w.u);
  const auto f = energy(w, CoefficientSpec::constant(1.0), 1);
  CHECK(std::abs(f.total + tail - G / 3.0) < 1e-4);
  const auto d = energy(w, CoefficientSpec::constant(1.0), -1);
  CHECK(std::abs(d.total + tail - (0.5 + 1.0 / 6.0) * G) < 1e-4);
  CHECK(std::abs(d.total + tail - 8.547) < 1e-3);
}

TEST_CASE("trapping") {
  const auto& ground = cached_ground_state_constants(3);
  const RadialGrid g(3, 10.0, 100);
  const auto z = trapping_check(WaveState::zero(g), CoefficientSpec::constant(1.0), 0.1, ground);
  CHECK(z.hypotheses_hold);
  CHECK(z.ratio_gradient == 1.0);
  CHECK(z.ratio_energy == 1.0);

  const auto spec = CoefficientSpec::sinh_power(2.0);
  const auto small = wide_W(0.3);
  const double e = energy(small, spec, 1).total;
  const double delta = admissible_delta(e, ground.energy_E1);
  CHECK(delta > 0.0);
  const auto r = trapping_check(small, spec, delta, ground);
  CHECK(r.hypotheses_hold);
  CHECK(r.all_hold());
  CHECK(r.ratio_gradient >= r.lower_constant);
  CHECK(r.ratio_gradient <= 1.0);

  const auto big = trapping_check(wide_W(1.5), spec, 0.1, ground);
  CHECK_FALSE(big.hypotheses_hold);
}

TEST_CASE("Sobolev-type bound below the ground state") {
  const RadialGrid g(3, 30.0, 3000);
  for (double a : {0.2, 0.6, 0.9}) {
    const auto u = scaled_ground_state(g, a, 1.0, 10.0).u;
    CHECK(std::pow(lp_norm(u, 6.0), 6.0) <= h1_seminorm(u) * h1_seminorm(u) * (1.0 + 1e-3));
  }
}

TEST_CASE("Y norm accumulation") {
  const RadialGrid g(3, 10.0, 200);
  const auto spec = CoefficientSpec::constant(1.0);
  std::vector<WaveState> zeros;
  for (int k = 0; k < 3; ++k) zeros.emplace_back(RadialField(g), RadialField(g), 0.1 * k);
  CHECK(y_norm_accumulate(zeros, spec) == 0.0);

  const auto u = gaussian_bump(g, 1.0, 0.0, 1.0);
  std::vector<WaveState> steady;
  for (int k = 0; k <= 10; ++k) steady.emplace_back(u.u, u.u_t, 0.1 * k);
  // Time integral of a constant over [0, 1] is the constant itself.
  CHECK(y_norm_accumulate(steady, spec, YNorm::plain) == doctest::Approx(lp_norm(u.u, 10.0)).epsilon(1e-12));
  CHECK_THROWS(y_norm_accumulate(std::span<const WaveState>(), spec));
}

TEST_CASE("Y norm of a small solution settles") {
  const int n = 2048;
  const RadialGrid g(3, (16.0 + 40.0) * n / (n - 2.0), n);
  SolverConfig cfg;
  cfg.t_final = 40.0;
  cfg.coefficient = CoefficientSpec::sinh_power(2.0);
  const auto trace = evolve(scaled_ground_state(g, 0.05, 1.0, 8.0), cfg);
  const double total = trace.rows.back().y_norm_accum;
  double at_30 = 0.0;
  for (const auto& r : trace.rows)
    if (r.t <= 30.0) at_30 = r.y_norm_accum;
  CHECK(std::isfinite(total));
  CHECK(total - at_30 <= 0.01 * total);
}

TEST_CASE("Morawetz accumulation") {
  const int n = 2048;
  const RadialGrid g(3, (6.0 + 10.0) * n / (n - 2.0), n);
  SolverConfig cfg;
  cfg.t_final = 10.0;
  cfg.zeta = -1;
  cfg.coefficient = CoefficientSpec::gaussian(1.0);
  const auto trace = evolve(gaussian_bump(g, 1.0, 0.0, 1.0), cfg);
  const auto m = morawetz_accumulate(trace);
  CHECK(m.margin() > 0.0);
  for (std::size_t k = 1; k < trace.rows.size(); ++k)
    CHECK(trace.rows[k].morawetz_accum >= trace.rows[k - 1].morawetz_accum);

  cfg.t_final = 1.0;
  const auto zero = morawetz_accumulate(evolve(WaveState::zero(g), cfg));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.bound == 0.0);

  cfg.zeta = 1;
  CHECK_THROWS(morawetz_accumulate(evolve(gaussian_bump(g, 0.1, 0.0, 1.0), cfg)));
}

TEST_CASE("virial functionals of zero") {
  const RadialGrid g(3, 20.0, 400);
  const auto spec = CoefficientSpec::sinh_power(2.0);
  const auto v = virial_G_R(WaveState::zero(g), spec, 5.0);
  CHECK(v.G == 0.0);
  CHECK(v.G_dot_predicted == 0.0);
  const auto y = blowup_y_R(WaveState::zero(g), spec, 5.0);
  CHECK(y.y == 0.0);
  CHECK(y.y_dot == 0.0);
  CHECK(y.y_ddot_predicted == 0.0);
  CHECK(tail_kappa(WaveState::zero(g), 5.0) == 0.0);
  CHECK_THROWS(virial_G_R(WaveState::zero(g), spec, 15.0));
}

TEST_CASE("virial identities on a smooth focusing run") {
  const double R = 26.0;
  const RadialGrid g(3, 52.0, 4096);
  const auto spec = CoefficientSpec::sinh_power(2.0);
  SolverConfig cfg;
  cfg.t_final = 0.5;
  cfg.cadence = 1;
  cfg.coefficient = spec;
  std::vector<WaveState> s;
  const DiagnosticHook hook = [&](const WaveState& w) { s.push_back(w); };
  evolve(scaled_ground_state(g, 1.2, 1.0, 8.0), cfg, std::span<const DiagnosticHook>(&hook, 1));
  REQUIRE(s.size() > 10);
  for (std::size_t k = 1; k + 1 < s.size(); k += 5) {
    const double dt = s[k + 1].t - s[k].t;
    const auto a = virial_G_R(s[k - 1], spec, R), b = virial_G_R(s[k], spec, R), c = virial_G_R(s[k + 1], spec, R);
    const double tol = std::max(1e-3 * b.scale, 5.0 * b.kappa);
    CHECK(std::abs((c.G - a.G) / (2 * dt) - b.G_dot_predicted) < tol);
    CHECK(std::abs((c.H - a.H) / (2 * dt) - b.H_dot_predicted) < tol);
    const auto ya = blowup_y_R(s[k - 1], spec, R), yb = blowup_y_R(s[k], spec, R), yc = blowup_y_R(s[k + 1], spec, R);
    CHECK(std::abs((yc.y - 2 * yb.y + ya.y) / (dt * dt) - yb.y_ddot_predicted) < std::max(1e-3 * yb.scale, 5.0 * b.kappa));
    CHECK(std::abs((yc.y - ya.y) / (2 * dt) - yb.y_dot) < 1e-3 * yb.scale);
  }
}

TEST_CASE("tail functional") {
  const RadialGrid g(3, 40.0, 4000);
  const auto data = gaussian_bump(g, 1.0, 2.0, 0.5);
  double prev = tail_kappa(data, 0.5);
  for (double R : {1.0, 2.0, 4.0, 8.0}) {
    const double k = tail_kappa(data, R);
    CHECK(k <= prev);
    prev = k;
  }
  // Support is within 5, so after t = 10 nothing has crossed R = 20.
  const auto later = evolve_linear(data, 10.0);
  CHECK(tail_kappa(later, 20.0) < 1e-20);
}

TEST_CASE("Hardy ratio") {
  const RadialGrid g(3, 30.0, 3000);
  for (double w : {0.5, 1.0, 3.0}) {
    const auto f = gaussian_bump(g, 1.0, 0.0, w).u;
    CHECK(hardy_ratio(f) <= 4.01);
    const auto shell = gaussian_bump(g, 1.0, 5.0, w).u;
    CHECK(hardy_ratio(shell) <= 4.01);
  }
}

TEST_CASE("trace csv") {
  RunTrace t;
  t.rows.push_back(TraceRow{0.0, 1.0, 0.5, 0.5, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  std::ostringstream os;
  write_trace_csv(t, os);
  const auto text = os.str();
  CHECK(text.rfind("t,E_total,E_kinetic,E_gradient,E_potential,sup_norm,h_norm,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

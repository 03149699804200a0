#include <doctest.h>

#include <cmath>
#include <numbers>

#include "critwave/functionals.hpp"
#include "critwave/hyperbolic.hpp"
#include "oracles.hpp"

using namespace critwave;

namespace {

H3Field gaussian(const RadialGrid& g) {
  H3Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::exp(-g.r(i) * g.r(i));
  return f;
}

}  // namespace

TEST_CASE("transform basics") {
  const RadialGrid g(3, 8.0, 800);
  const H3Field zero(g);
  for (double v : T_forward(zero).values) CHECK(v == 0.0);
  for (double v : T_inverse(RadialField(g)).values) CHECK(v == 0.0);

  H3Field flat(g);
  for (auto& v : flat.values) v = 2.0;
  CHECK(T_forward(flat)[0] == 2.0);

  const auto f = gaussian(g);
  const auto back = T_inverse(T_forward(f));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back[i] - f[i]) <= 1e-14);
  CHECK_THROWS_AS(H3Field(RadialGrid(4, 8.0, 100)), std::invalid_argument);
}

TEST_CASE("L2 isometry against an independent integral") {
  const RadialGrid g(3, 10.0, 2000);
  const auto f = gaussian(g);
  // 4 pi int e^{-2 r^2} sinh^2 r dr.
  const double h3 = 4.0 * std::numbers::pi * oracle::exp_sinh([](double r) {
                      const double s = std::sinh(r);
                      return std::isfinite(s) ? std::exp(-2.0 * r * r) * s * s : 0.0;
                    });
  CHECK(std::abs(h3_l2_norm(f) / std::sqrt(h3) - 1.0) < 1e-8);
  CHECK(std::abs(lp_norm(T_forward(f), 2.0) / h3_l2_norm(f) - 1.0) < 1e-8);
}

TEST_CASE("H01 isometry") {
  const RadialGrid g(3, 8.0, 4096);
  for (double amp : {0.5, 2.0}) {
    const auto v = h3_family(g, amp, 1.0).first;
    const auto n = h3_h01_norm(v);
    CHECK(n.gradient > n.mass);
    CHECK(std::abs(std::sqrt(n.norm_sq()) / h1_seminorm(T_forward(v)) - 1.0) < 1e-6);
    CHECK(std::abs(h1_seminorm(T_forward(T_inverse(T_forward(v)))) / std::sqrt(n.norm_sq()) - 1.0) < 1e-6);
  }
}

TEST_CASE("intertwining residual is second order") {
  CHECK(intertwining_residual(H3Field(RadialGrid(3, 8.0, 400))) == 0.0);
  const auto ratio = [](auto make) {
    return intertwining_residual(make(RadialGrid(3, 8.0, 1024))) / intertwining_residual(make(RadialGrid(3, 8.0, 2048)));
  };
  CHECK(ratio(gaussian) == doctest::Approx(4.0).epsilon(0.05));
  const auto shell = [](const RadialGrid& g) {
    H3Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r(i);
      f.values[i] = (r > 1.0 && r < 2.0) ? std::pow(std::sin(std::numbers::pi * (r - 1.0)), 4) : 0.0;
    }
    return f;
  };
  CHECK(ratio(shell) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("hyperbolic energy") {
  const RadialGrid g(3, 8.0, 4096);
  CHECK(h3_energy(H3Field(g), H3Field(g)) == 0.0);
  const auto [v, vt] = h3_family(g, 1.0, 1.0);
  H3Field vel(g);
  for (std::size_t i = 0; i < g.size(); ++i) vel.values[i] = 0.3 * v[i] * g.r(i);
  const double lhs = h3_energy(v, vel);
  const double rhs = energy(WaveState(T_forward(v), T_forward(vel)), h3_coefficient(), 1).total;
  CHECK(std::abs(lhs / rhs - 1.0) < 1e-6);

  const double n2 = h3_h01_norm(v).norm_sq();
  const double l6 = std::pow(h3_lp_norm(v, 6.0), 6.0);
  for (double eps : {0.1, 0.5}) {
    H3Field s(g);
    for (std::size_t i = 0; i < g.size(); ++i) s.values[i] = eps * v[i];
    CHECK(h3_energy(s, H3Field(g)) ==
          doctest::Approx(eps * eps * 0.5 * n2 - std::pow(eps, 6) * l6 / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("coefficient of the transformed problem") {
  CHECK(h3_coefficient() == CoefficientSpec::sinh_power(4.0));
  CHECK(check_focusing_condition(h3_coefficient(), condition_scan_grid(3)).pass);
}

TEST_CASE("hyperbolic predictions match the transformed ones") {
  const auto& ground = cached_ground_state_constants(3);
  const RadialGrid g(3, 8.0, 2048);
  const auto zero = h3_predict(H3Field(g), H3Field(g), ground);
  CHECK(zero.verdict == Verdict::Scatter);
  CHECK(zero.theorem == TheoremId::hyperbolic_threshold);
  for (double amp : {0.1, 0.5, 1.0, 1.5, 2.5, 3.0}) {
    const auto [a, b] = h3_family(g, amp, 1.0);
    const auto p = h3_predict(a, b, ground);
    CHECK(p.verdict ==
          predict_focusing(WaveState(T_forward(a), T_forward(b)), CoefficientSpec::sinh_power(4.0), ground).verdict);
    if (amp <= 0.5) CHECK(p.verdict == Verdict::Scatter);
    if (amp >= 2.5) {
      CHECK(std::sqrt(h3_h01_norm(a).norm_sq()) > ground.grad_norm());
      CHECK(h3_energy(a, b) < ground.energy_E1);
      CHECK(p.verdict == Verdict::BlowUp);
    }
  }
}

TEST_CASE("hyperbolic runs conserve energy and follow the threshold") {
  const auto& ground = cached_ground_state_constants(3);
  SolverConfig cfg;
  cfg.t_final = 10.0;
  cfg.cadence = 20;
  const int n = 2048;
  const RadialGrid g(3, (6.0 + 10.0) * n / (n - 2.0), n);

  const auto [v0, v1] = h3_family(g, 0.5, 1.0);
  const auto run = h3_solve(v0, v1, cfg);
  REQUIRE(run.energy.size() > 2);
  double drift = 0.0;
  for (double e : run.energy) drift = std::max(drift, std::abs(e - run.energy.front()) / std::abs(run.energy.front()));
  CHECK(drift < 1e-4);
  CHECK(run.trace.outcome.kind != OutcomeKind::BlewUp);
  CHECK(h3_energy(H3Field(g), H3Field(g)) == 0.0);

  const auto [w0, w1] = h3_family(g, 3.0, 1.0);
  REQUIRE(h3_predict(w0, w1, ground).verdict == Verdict::BlowUp);
  CHECK(h3_solve(w0, w1, cfg).trace.outcome.kind == OutcomeKind::BlewUp);
}

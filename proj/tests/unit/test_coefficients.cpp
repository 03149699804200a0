#include <doctest.h>

#include <cmath>

#include "critwave/coefficients.hpp"

using namespace critwave;

TEST_CASE("coefficient values") {
  const auto s2 = CoefficientSpec::sinh_power(2.0);
  CHECK(s2.eval(0.0).value == doctest::Approx(1.0));
  CHECK(s2.eval(0.0).d_dr == doctest::Approx(0.0));
  CHECK(s2.eval(1e-6).value == doctest::Approx(1.0));
  CHECK(s2.eval(1.0).value == doctest::Approx(std::pow(1.0 / std::sinh(1.0), 2)).epsilon(1e-14));
  CHECK(s2.eval(1.0).value == doctest::Approx(0.72406).epsilon(1e-5));

  const auto one = CoefficientSpec::constant(1.0);
  for (double r : {0.0, 0.5, 40.0}) {
    CHECK(one.eval(r).value == 1.0);
    CHECK(one.eval(r).d_dr == 0.0);
  }

  CHECK_THROWS_AS(CoefficientSpec::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSpec::constant(1.5), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSpec::sinh_power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSpec::gaussian(-1.0), std::invalid_argument);
}

TEST_CASE("derivative agrees with a difference quotient") {
  for (const auto& spec : {CoefficientSpec::sinh_power(3.0), CoefficientSpec::gaussian(0.7)}) {
    for (double r : {0.3, 1.0, 4.0}) {
      const double h = 1e-5;
      const double fd = (spec.eval(r + h).value - spec.eval(r - h).value) / (2.0 * h);
      CHECK(spec.eval(r).d_dr == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("built-in families stay in (0, 1] and do not increase") {
  const RadialGrid g(3, 50.0, 5000);
  for (const auto& spec : {CoefficientSpec::constant(0.3), CoefficientSpec::sinh_power(2.0),
                           CoefficientSpec::sinh_power(6.0), CoefficientSpec::gaussian(0.01)}) {
    double prev = 2.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = spec.eval(g.r(i)).value;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("defocusing condition") {
  const auto grid = condition_scan_grid(3);
  const auto flat = check_defocusing_condition(CoefficientSpec::constant(1.0), grid);
  CHECK(flat.pass);
  CHECK(flat.min_value == doctest::Approx(1.0));
  CHECK(check_defocusing_condition(CoefficientSpec::gaussian(1.0), grid).pass);

  // Samples of 1 - r up to r = 0.999, then held at 0.01: phi climbs from 0.001 to 0.01.
  const auto bad = CoefficientSpec::table({0.0, 0.5, 0.999, 1.0, 2.0}, {1.0, 0.5, 0.001, 0.01, 0.01});
  const auto r = check_defocusing_condition(bad, grid);
  CHECK_FALSE(r.pass);
  CHECK(r.argmin_r >= 0.999);
  CHECK(r.argmin_r <= 1.0);
  CHECK_FALSE(check_defocusing_condition(bad, grid.refined()).pass);
}

TEST_CASE("focusing condition") {
  const auto grid = condition_scan_grid(3);
  const auto flat = check_focusing_condition(CoefficientSpec::constant(1.0), grid);
  CHECK(flat.pass);
  CHECK(std::abs(flat.min_value) <= kNonStrictTolerance);
  for (int sigma = 2; sigma <= 6; ++sigma) {
    const auto s = CoefficientSpec::sinh_power(sigma);
    CHECK(check_focusing_condition(s, grid).pass);
    CHECK(check_focusing_condition(s, grid.refined()).pass);
  }
  CHECK(check_focusing_condition(CoefficientSpec::constant(0.5), grid).pass);
}

TEST_CASE("Morawetz weight") {
  const RadialGrid g(3, 5.0, 500);
  const auto flat = morawetz_weight(CoefficientSpec::constant(1.0), g);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0));

  const auto gw = morawetz_weight(CoefficientSpec::gaussian(1.0), g);
  CHECK(gw[100] == doctest::Approx(1.5 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(gw[100] == doctest::Approx(0.55182).epsilon(1e-5));

  const auto sw = morawetz_weight(CoefficientSpec::sinh_power(2.0), g);
  for (double v : sw.values) CHECK(v > 0.0);
}

TEST_CASE("Morawetz weight matches the defocusing scan minimum") {
  const auto grid = condition_scan_grid(3);
  const auto spec = CoefficientSpec::gaussian(0.5);
  const auto eta = morawetz_weight(spec, grid);
  double lo = eta[0];
  for (double v : eta.values) lo = std::min(lo, v);
  CHECK(check_defocusing_condition(spec, grid).min_value == doctest::Approx(lo).epsilon(1e-12));
}

TEST_CASE("json round trip") {
  for (const auto& spec : {CoefficientSpec::constant(0.25), CoefficientSpec::sinh_power(2.0),
                           CoefficientSpec::gaussian(1.0), CoefficientSpec::table({0.0, 1.0}, {1.0, 0.5})}) {
    nlohmann::json j;
    to_json(j, spec);
    CHECK(coefficient_from_json(j) == spec);
  }
  CHECK_THROWS(coefficient_from_json(nlohmann::json{{"family", "bessel"}}));
}

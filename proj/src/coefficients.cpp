#include "critwave/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace critwave {

namespace {

constexpr double kSeriesCutoff = 1e-4;

// q(r) = r / sinh r and q'(r).
CoefficientValue sinh_ratio(double r) {
  if (r < kSeriesCutoff) {
    const double r2 = r * r;
    return {1.0 - r2 / 6.0 + 7.0 * r2 * r2 / 360.0, -r / 3.0 + 7.0 * r2 * r / 90.0};
  }
  if (r > 700.0) return {0.0, 0.0};
  const double s = std::sinh(r);
  const double q = r / s;
  return {q, q * (1.0 / r - 1.0 / std::tanh(r))};
}

// 1 - r coth r
double one_minus_r_coth(double r) {
  if (r < kSeriesCutoff) {
    const double r2 = r * r;
    return -r2 / 3.0 + r2 * r2 / 45.0;
  }
  return 1.0 - r / std::tanh(r);
}

}  // namespace

CoefficientSpec CoefficientSpec::constant(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("constant coefficient needs 0 < c <= 1");
  return {CoefficientFamily::constant, c};
}

CoefficientSpec CoefficientSpec::sinh_power(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sinh_power needs sigma > 0");
  return {CoefficientFamily::sinh_power, sigma};
}

CoefficientSpec CoefficientSpec::gaussian(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gaussian needs alpha > 0");
  return {CoefficientFamily::gaussian, alpha};
}

CoefficientSpec CoefficientSpec::table(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() < 2 || radii.size() != values.size()) {
    throw std::invalid_argument("table needs at least two (r, phi) samples of equal length");
  }
  if (radii.front() != 0.0) throw std::invalid_argument("table must start at r = 0");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) throw std::invalid_argument("table radii must increase");
  }
  for (double v : values) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("table values must lie in (0, 1]");
  }
  CoefficientSpec spec(CoefficientFamily::table, 0.0);
  spec.radii_ = std::move(radii);
  spec.values_ = std::move(values);
  return spec;
}

std::size_t CoefficientSpec::segment(double r) const {
  auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  return static_cast<std::size_t>(std::distance(radii_.begin(), it)) - 1;
}

CoefficientValue CoefficientSpec::eval(double r) const {
  switch (family_) {
    case CoefficientFamily::constant:
      return {parameter_, 0.0};
    case CoefficientFamily::sinh_power: {
      const auto q = sinh_ratio(r);
      if (q.value == 0.0) return {0.0, 0.0};
      const double phi = std::pow(q.value, parameter_);
      return {phi, parameter_ * phi / q.value * q.d_dr};
    }
    case CoefficientFamily::gaussian: {
      const double phi = std::exp(-parameter_ * r * r);
      return {phi, -2.0 * parameter_ * r * phi};
    }
    case CoefficientFamily::table: {
      const std::size_t k = segment(r);
      if (k + 1 >= radii_.size()) return {values_.back(), 0.0};
      const double slope = (values_[k + 1] - values_[k]) / (radii_[k + 1] - radii_[k]);
      return {values_[k] + slope * (r - radii_[k]), slope};
    }
  }
  return {0.0, 0.0};
}

double CoefficientSpec::log_slope(double r) const {
  switch (family_) {
    case CoefficientFamily::constant:
      return 0.0;
    case CoefficientFamily::sinh_power:
      return parameter_ * one_minus_r_coth(r);
    case CoefficientFamily::gaussian:
      return -2.0 * parameter_ * r * r;
    case CoefficientFamily::table: {
      const auto v = eval(r);
      return r * v.d_dr / v.value;
    }
  }
  return 0.0;
}

double CoefficientSpec::table_spacing() const {
  if (family_ != CoefficientFamily::table) return std::numeric_limits<double>::infinity();
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < radii_.size(); ++k) h = std::min(h, radii_[k] - radii_[k - 1]);
  return h;
}

std::string CoefficientSpec::name() const {
  std::ostringstream os;
  switch (family_) {
    case CoefficientFamily::constant: os << "constant(" << parameter_ << ")"; break;
    case CoefficientFamily::sinh_power: os << "sinh_power(" << parameter_ << ")"; break;
    case CoefficientFamily::gaussian: os << "gaussian(" << parameter_ << ")"; break;
    case CoefficientFamily::table: os << "table[" << radii_.size() << "]"; break;
  }
  return os.str();
}

CoefficientValue phi_eval(const CoefficientSpec& spec, double r) {
  if (r < 0.0) throw std::invalid_argument("phi_eval needs r >= 0");
  return spec.eval(r);
}

void to_json(nlohmann::json& j, const CoefficientSpec& spec) {
  switch (spec.family()) {
    case CoefficientFamily::constant:
      j = {{"family", "constant"}, {"c", spec.parameter()}};
      break;
    case CoefficientFamily::sinh_power:
      j = {{"family", "sinh_power"}, {"sigma", spec.parameter()}};
      break;
    case CoefficientFamily::gaussian:
      j = {{"family", "gaussian"}, {"alpha", spec.parameter()}};
      break;
    case CoefficientFamily::table:
      j = {{"family", "table"}, {"r", spec.table_radii()}, {"phi", spec.table_values()}};
      break;
  }
}

CoefficientSpec coefficient_from_json(const nlohmann::json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "constant") return CoefficientSpec::constant(j.value("c", 1.0));
  if (family == "sinh_power") return CoefficientSpec::sinh_power(j.at("sigma").get<double>());
  if (family == "gaussian") return CoefficientSpec::gaussian(j.at("alpha").get<double>());
  if (family == "table") {
    return CoefficientSpec::table(j.at("r").get<std::vector<double>>(),
                                  j.at("phi").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown coefficient family '" + family + "'");
}

void from_json(const nlohmann::json& j, CoefficientSpec& spec) { spec = coefficient_from_json(j); }

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::defocusing_1_3: return "defocusing_1_3";
    case ConditionId::focusing_1_4: return "focusing_1_4";
    case ConditionId::decay_1_1: return "decay_1_1";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const ConditionReport& report) {
  j = {{"condition", to_string(report.id)},
       {"min_value", report.min_value},
       {"min_certified", report.min_certified},
       {"argmin_r", report.argmin_r},
       {"verdict", report.pass ? "pass" : "fail"},
       {"coarse_grid_warning", report.coarse_grid_warning},
       {"grid", {{"d", report.dim}, {"r_max", report.r_max}, {"n", report.cells}}}};
}

RadialGrid condition_scan_grid(int dim) { return RadialGrid(dim, 50.0, 100000); }

namespace {

ConditionReport blank_report(ConditionId id, const CoefficientSpec& spec, const RadialGrid& grid) {
  ConditionReport rep{};
  rep.id = id;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.min_certified = std::numeric_limits<double>::infinity();
  rep.dim = grid.dim();
  rep.r_max = grid.r_max();
  rep.cells = grid.cells();
  rep.coarse_grid_warning = spec.table_spacing() < grid.dr();
  return rep;
}

}  // namespace

ConditionReport check_defocusing_condition(const CoefficientSpec& spec, const RadialGrid& grid) {
  auto rep = blank_report(ConditionId::defocusing_1_3, spec, grid);
  const int d = grid.dim();
  const double k = (d - 2.0) / (2.0 * (d - 1.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double certified = 1.0 - k * spec.log_slope(r);
    const auto v = spec.eval(r);
    const double raw = v.value - k * r * v.d_dr;
    rep.min_value = std::min(rep.min_value, raw);
    if (certified < rep.min_certified) {
      rep.min_certified = certified;
      rep.argmin_r = r;
    }
  }
  rep.pass = rep.min_certified > kStrictTolerance;
  return rep;
}

ConditionReport check_focusing_condition(const CoefficientSpec& spec, const RadialGrid& grid) {
  auto rep = blank_report(ConditionId::focusing_1_4, spec, grid);
  const int d = grid.dim();
  const double two_star = 2.0 * d / (d - 2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const auto v = spec.eval(r);
    const double g = two_star * (1.0 - v.value) + r * v.d_dr;
    if (g < rep.min_value) {
      rep.min_value = g;
      rep.argmin_r = r;
    }
  }
  rep.min_certified = rep.min_value;
  rep.pass = rep.min_value >= -kNonStrictTolerance;
  return rep;
}

ConditionReport check_decay_condition(const CoefficientSpec& spec, const RadialGrid& grid) {
  auto rep = blank_report(ConditionId::decay_1_1, spec, grid);
  bool in_range = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double phi = spec.eval(r).value;
    // analytic families are positive by construction; underflow to 0 is not a violation
    const bool positive = spec.family() != CoefficientFamily::table || phi > 0.0;
    in_range = in_range && positive && phi <= 1.0;
    if (phi < rep.min_value) {
      rep.min_value = phi;
      rep.argmin_r = r;
    }
  }
  const double head = spec.eval(0.0).value;
  const double tail = spec.eval(grid.r_max()).value;
  rep.min_certified = rep.min_value;
  rep.pass = in_range && tail <= 1e-6 * head;
  return rep;
}

RadialField morawetz_weight(const CoefficientSpec& spec, const RadialGrid& grid) {
  const int d = grid.dim();
  const double k = (d - 2.0) / (2.0 * (d - 1.0));
  return sample(grid, [&](double r) {
    const auto v = spec.eval(r);
    return v.value - k * r * v.d_dr;
  });
}

RadialField sample_coefficient(const CoefficientSpec& spec, const RadialGrid& grid) {
  return sample(grid, [&](double r) { return spec.eval(r).value; });
}

}  // namespace critwave

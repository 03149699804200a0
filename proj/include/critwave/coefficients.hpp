#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "critwave/radial_grid.hpp"

namespace critwave {

enum class CoefficientFamily { constant, sinh_power, gaussian, table };

struct CoefficientValue {
  double value;
  double d_dr;
};

/// A radial coefficient phi with values in (0, 1].
///
/// Families: constant(c), sinh_power(sigma) = (r / sinh r)^sigma,
/// gaussian(alpha) = exp(-alpha r^2), and table(r_k, phi_k) interpolated
/// piecewise linearly (held constant past the last sample).
class CoefficientSpec {
 public:
  static CoefficientSpec constant(double c);
  static CoefficientSpec sinh_power(double sigma);
  static CoefficientSpec gaussian(double alpha);
  static CoefficientSpec table(std::vector<double> radii, std::vector<double> values);

  CoefficientFamily family() const { return family_; }
  double parameter() const { return parameter_; }
  const std::vector<double>& table_radii() const { return radii_; }
  const std::vector<double>& table_values() const { return values_; }

  CoefficientValue eval(double r) const;
  /// r * phi'(r) / phi(r), evaluated without forming phi so that it stays
  /// finite where phi underflows.
  double log_slope(double r) const;

  /// Smallest spacing between table samples (infinity for analytic families).
  double table_spacing() const;

  std::string name() const;

  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;

 private:
  CoefficientSpec(CoefficientFamily f, double p) : family_(f), parameter_(p) {}
  std::size_t segment(double r) const;

  CoefficientFamily family_;
  double parameter_;
  std::vector<double> radii_;
  std::vector<double> values_;
};

CoefficientValue phi_eval(const CoefficientSpec& spec, double r);

void to_json(nlohmann::json& j, const CoefficientSpec& spec);
void from_json(const nlohmann::json& j, CoefficientSpec& spec);
CoefficientSpec coefficient_from_json(const nlohmann::json& j);

enum class ConditionId { defocusing_1_3, focusing_1_4, decay_1_1 };
std::string to_string(ConditionId id);

struct ConditionReport {
  ConditionId id;
  /// Minimum of the raw left-hand side over the scan.
  double min_value;
  /// Minimum of the left-hand side divided by phi (defocusing) or the raw
  /// value (focusing); the verdict is taken on this quantity.
  double min_certified;
  double argmin_r;
  bool pass;
  bool coarse_grid_warning;
  int dim;
  double r_max;
  int cells;
};

void to_json(nlohmann::json& j, const ConditionReport& report);

/// Grid used to certify conditions when the caller has no preference:
/// 10^5 cells on [0, 50].
RadialGrid condition_scan_grid(int dim);

inline constexpr double kStrictTolerance = 1e-12;
inline constexpr double kNonStrictTolerance = 1e-12;

/// phi - (d-2) r phi' / (2(d-1)) > 0 on every node. Certified on
/// 1 - (d-2)/(2(d-1)) * r phi'/phi so decaying families do not underflow
/// into a false failure.
ConditionReport check_defocusing_condition(const CoefficientSpec& spec, const RadialGrid& grid);

/// 2*(1 - phi) + r phi' >= 0 on every node.
ConditionReport check_focusing_condition(const CoefficientSpec& spec, const RadialGrid& grid);

/// 0 < phi <= 1 on every node and phi(r_max) below 1e-6 of phi(0).
ConditionReport check_decay_condition(const CoefficientSpec& spec, const RadialGrid& grid);

/// eta(r) = phi - (d-2) r phi' / (2(d-1)) on the grid.
RadialField morawetz_weight(const CoefficientSpec& spec, const RadialGrid& grid);

RadialField sample_coefficient(const CoefficientSpec& spec, const RadialGrid& grid);

}  // namespace critwave

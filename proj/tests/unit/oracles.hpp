#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// exp-sinh quadrature of f over [0, inf): x = exp(pi/2 sinh t).
inline double exp_sinh(const std::function<double(double)>& f, double h = 1.0 / 64.0, double t_max = 4.5) {
  const double half_pi = std::numbers::pi / 2.0;
  double s = 0.0;
  for (double t = -t_max; t <= t_max; t += h) {
    const double x = std::exp(half_pi * std::sinh(t));
    const double dx = half_pi * std::cosh(t) * x;
    const double v = f(x) * dx;
    if (std::isfinite(v)) s += v;
  }
  return h * s;
}

/// Unit-sphere area in R^d.
inline double sphere(int d) { return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0); }

inline double W(int d, double r) { return std::pow(1.0 + r * r / (d * (d - 2.0)), -(d - 2.0) / 2.0); }

inline double W_prime(int d, double r) {
  return -(r / d) * std::pow(1.0 + r * r / (d * (d - 2.0)), -d / 2.0);
}

/// ||grad W||^2 by exp-sinh.
inline double grad_W_sq(int d) {
  return sphere(d) * exp_sinh([d](double r) {
           const double g = W_prime(d, r);
           return g * g * std::pow(r, d - 1);
         });
}

/// Radial free wave in R^3 from (f, 0): r u = ((r+t) f(r+t) + (r-t) f(|r-t|)) / 2.
inline double dalembert3(const std::function<double(double)>& f, double r, double t) {
  if (r == 0.0) {
    const double h = 1e-5;
    return (dalembert3(f, h, t) * 4.0 - dalembert3(f, 2.0 * h, t)) / 3.0;
  }
  return 0.5 * ((r + t) * f(r + t) + (r - t) * f(std::abs(r - t))) / r;
}

}  // namespace oracle

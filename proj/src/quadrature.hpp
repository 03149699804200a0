#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace critwave::detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// Composite Gauss-Legendre of fn over [a, b] with `panels` equal panels.
template <class Fn>
double composite_gauss(Fn&& fn, double a, double b, int panels, int order = 16) {
  const auto [x, w] = gauss_legendre(order);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < order; ++k) sum += w[k] * fn(lo + 0.5 * h * (x[k] + 1.0));
  }
  return 0.5 * h * sum;
}

}  // namespace critwave::detail

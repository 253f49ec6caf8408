#include "cohres/quadrature.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cohres {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, fmt::format("quadrature order {} < 1", n));
  GaussLegendreRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16)
        break;
    }
    // one more derivative evaluation at the converged root for the weight
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);

    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.x[n / 2] = 0.0;
  return rule;
}

AngleGrid gauss_legendre_angle_grid(int n) {
  const auto rule = gauss_legendre(n);
  AngleGrid g;
  g.nodes.resize(n);
  g.weights.resize(n);
  // x ascending means theta descending; reverse so theta increases.
  for (int k = 0; k < n; ++k) {
    const int src = n - 1 - k;
    g.nodes[k] = std::acos(rule.x[src]);
    g.weights[k] = constants::two_pi * rule.w[src];
  }
  return g;
}

double legendre_series(std::span<const double> coeffs, double x) {
  if (coeffs.empty())
    return 0.0;
  double sum = coeffs[0];
  double p_prev = 1.0;
  double p = x;
  for (std::size_t l = 1; l < coeffs.size(); ++l) {
    sum += coeffs[l] * p;
    const double next = ((2.0 * l + 1.0) * x * p - l * p_prev) / (l + 1.0);
    p_prev = p;
    p = next;
  }
  return sum;
}

} // namespace cohres

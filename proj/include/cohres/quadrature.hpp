#pragma once

#include "cohres/core.hpp"

#include <span>
#include <vector>

namespace cohres {

struct GaussLegendreRule {
  std::vector<double> x;  // ascending in (-1, 1)
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1], roots by Newton iteration on the
/// three-term recurrence.
GaussLegendreRule gauss_legendre(int n);

/// Angle grid from an n-point rule in cos(theta), ordered by increasing theta.
/// Weights include the 2*pi azimuthal factor.
AngleGrid gauss_legendre_angle_grid(int n);

/// sum_l c_l P_l(x)
double legendre_series(std::span<const double> coeffs, double x);

} // namespace cohres

#pragma once

#include "cohres/xsection.hpp"

#include <cstddef>
#include <optional>
#include <utility>

namespace cohres {

/// Extremum pair of a control objective over (s, phi12).
struct ControlRange {
  double min_value = 0.0;
  double max_value = 0.0;
  ControlParams params_at_min;
  ControlParams params_at_max;
  bool unbounded_max = false;  // max_value is +inf; params_at_max is where the denominator vanishes
  bool degenerate = false;     // objective independent of the control parameters

  /// Distance between the two achieving points in (s, phi12 / 2 pi), with the
  /// phase difference taken on the circle. Informational only.
  double separation() const;
};

struct RatioOptions {
  double singular_tol = 1e-14;      // det B <= tol * trace(B)^2 means B is singular
  double proportional_tol = 1e-10;  // ||A - kappa B||_F <= tol * ||A||_F means A = kappa B
};

/// Exact extrema of evaluate_sigma: eigenvalues of the Hermitian matrix with
/// achieving parameters from its unit eigenvectors.
ControlRange sigma_extrema(const XsecMatrix& m);

/// Exact extrema of (c^H A c) / (c^H B c): the roots of det(A - lambda B) = 0.
ControlRange ratio_extrema(const XsecMatrix& num, const XsecMatrix& den,
                           const RatioOptions& opts = {});

/// Objective value for a ratio at a control point.
double evaluate_ratio(const XsecMatrix& num, const XsecMatrix& den, const ControlParams& p);

/// Values at s = 0 and s = 1 (either pure initial state, no interference).
std::pair<double, double> noncoherent_limits(const XsecMatrix& m);

struct OracleResult {
  ControlRange range;
  std::size_t skipped = 0;  // ratio lattice points with a vanishing denominator
};

/// Exhaustive lattice search: s_i = i / (n_s - 1), phi_j = 2 pi j / n_phi.
/// threads <= 0 runs the serial reference kernel. Ties resolve toward the
/// lexicographically smaller (s, phi) index, so every thread count returns the
/// same result.
OracleResult grid_oracle(const XsecMatrix& num, const std::optional<XsecMatrix>& den,
                         std::size_t n_s, std::size_t n_phi, int threads = 0);

} // namespace cohres

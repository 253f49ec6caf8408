#pragma once

#include "cohres/core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace cohres {

/// Hermitian 2x2 interference matrix of one product channel,
///   [[sigma11, sigma12], [conj(sigma12), sigma22]],
/// with sigma_ij = sum_n conj(f_{n,i}) f_{n,j} (quadrature-weighted for the
/// integral kind). sigma21 is never stored.
struct XsecMatrix {
  std::string channel;
  std::optional<std::size_t> node;  // set for the differential kind
  double sigma11 = 0.0;
  double sigma22 = 0.0;
  complex sigma12{};

  bool differential() const noexcept { return node.has_value(); }
  double trace() const noexcept { return sigma11 + sigma22; }
  double det() const noexcept { return sigma11 * sigma22 - std::norm(sigma12); }
};

/// Point in control space. s = |c2|^2 / (|c1|^2 + |c2|^2),
/// phi12 = Arg(c2 / c1) reduced to [0, 2 pi).
struct ControlParams {
  double s = 0.0;
  double phi12 = 0.0;

  ControlParams() = default;
  ControlParams(double s_, double phi);
};

double reduce_phase(double phi);

XsecMatrix xsec_matrix(const AmplitudeTable& t, std::string_view channel);
XsecMatrix diff_xsec_matrix(const AmplitudeTable& t, std::string_view channel, std::size_t node);

/// Index of the grid node nearest the given angle (radians).
std::size_t nearest_node(const AngleGrid& g, double theta);

/// Controlled cross section
///   (1-s) s11 + s s22 + 2 sqrt(s(1-s)) |s12| cos(Arg s12 + phi12).
/// Roundoff below -1e-10 * trace is clamped to zero; anything more negative
/// means the matrix was not positive semidefinite.
double evaluate_sigma(const XsecMatrix& m, const ControlParams& p);

/// |sigma12| / sqrt(sigma11 sigma22), clamped to [0, 1].
double schwartz_ratio(const XsecMatrix& m);

} // namespace cohres

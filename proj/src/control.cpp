#include "cohres/control.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"
#include "cohres/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohres {

namespace {

constexpr double psd_slack = 1e-10;

ControlParams params_from_vector(complex c1, complex c2) {
  const double n1 = std::norm(c1);
  const double n2 = std::norm(c2);
  const double s = n2 / (n1 + n2);
  const double phi = (c1 == complex{}) ? 0.0 : std::arg(c2 * std::conj(c1));
  return ControlParams(std::clamp(s, 0.0, 1.0), phi);
}

// Null vector of a Hermitian 2x2 [[m11, m12], [conj(m12), m22]] that is
// (numerically) singular; picks the better conditioned of the two row
// candidates.
std::pair<complex, complex> null_vector(double m11, double m22, complex m12) {
  const complex r1a = -m12, r1b = m11;                   // from row 1
  const complex r2a = m22, r2b = -std::conj(m12);        // from row 2
  if (std::norm(r1a) + std::norm(r1b) >= std::norm(r2a) + std::norm(r2b))
    return {r1a, r1b};
  return {r2a, r2b};
}

void check_psd(const XsecMatrix& m) {
  const double slack = psd_slack * m.trace();
  if (m.sigma11 < 0.0 || m.sigma22 < 0.0 ||
      std::abs(m.sigma12) > std::sqrt(m.sigma11 * m.sigma22) + slack)
    throw Error(ErrorKind::InternalConsistency,
                fmt::format("interference matrix of '{}' is not positive semidefinite", m.channel));
}

double clamp_min_eigen(double v, double scale, std::string_view channel) {
  if (v >= 0.0)
    return v;
  if (v >= -psd_slack * scale)
    return 0.0;
  throw Error(ErrorKind::InternalConsistency,
              fmt::format("negative eigenvalue {} for '{}'", v, channel));
}

kernels::FormTerms form_terms(const XsecMatrix& m) {
  return {m.sigma11, m.sigma22, std::abs(m.sigma12), std::arg(m.sigma12), psd_slack * m.trace()};
}

} // namespace

double ControlRange::separation() const {
  const double ds = params_at_max.s - params_at_min.s;
  double dp = std::abs(params_at_max.phi12 - params_at_min.phi12) / constants::two_pi;
  dp = std::min(dp, 1.0 - dp);
  return std::hypot(ds, dp);
}

ControlRange sigma_extrema(const XsecMatrix& m) {
  const double a = m.sigma11;
  const double d = m.sigma22;
  const complex b = m.sigma12;
  const double trace = a + d;
  const double h = 0.5 * (a - d);
  const double r = std::hypot(h, std::abs(b));

  ControlRange out;
  if (r == 0.0) {
    out.degenerate = true;
    out.min_value = out.max_value = 0.5 * trace;
    out.params_at_min = ControlParams(0.0, 0.0);
    out.params_at_max = ControlParams(1.0, 0.0);
    return out;
  }

  out.max_value = 0.5 * trace + r;
  out.min_value = clamp_min_eigen(m.det() / out.max_value, trace, m.channel);

  // Eigenvectors of [[a, b], [b*, d]], choosing the row whose entries do not
  // cancel: lambda_max - d = h + r, lambda_max - a = r - h.
  if (h >= 0.0) {
    out.params_at_max = params_from_vector(h + r, std::conj(b));
    out.params_at_min = params_from_vector(b, -(h + r));
  } else {
    out.params_at_max = params_from_vector(b, r - h);
    out.params_at_min = params_from_vector(-(r - h), std::conj(b));
  }
  return out;
}

double evaluate_ratio(const XsecMatrix& num, const XsecMatrix& den, const ControlParams& p) {
  const double n = evaluate_sigma(num, p);
  const double d = evaluate_sigma(den, p);
  if (d > 0.0)
    return n / d;
  if (n > 0.0)
    return std::numeric_limits<double>::infinity();
  throw Error(ErrorKind::ZeroDenominator,
              fmt::format("ratio {}/{} is 0/0 at s = {}, phi12 = {}", num.channel, den.channel, p.s,
                          p.phi12));
}

ControlRange ratio_extrema(const XsecMatrix& num, const XsecMatrix& den, const RatioOptions& opts) {
  const double trB = den.trace();
  if (!(trB > 0.0))
    throw Error(ErrorKind::ZeroDenominator,
                fmt::format("denominator channel '{}' has zero trace", den.channel));

  const double a11 = num.sigma11, a22 = num.sigma22;
  const complex a12 = num.sigma12;
  const double b11 = den.sigma11, b22 = den.sigma22;
  const complex b12 = den.sigma12;

  ControlRange out;

  // A = kappa B: the ratio does not depend on (s, phi12) at all.
  const double kappa = num.trace() / trB;
  const double dev = std::sqrt(std::pow(a11 - kappa * b11, 2) + std::pow(a22 - kappa * b22, 2) +
                               2.0 * std::norm(a12 - kappa * b12));
  const double normA = std::sqrt(a11 * a11 + a22 * a22 + 2.0 * std::norm(a12));
  if (dev <= opts.proportional_tol * normA) {
    out.degenerate = true;
    out.min_value = out.max_value = kappa;
    // canonical points, moved off a pure state that the denominator cannot see
    const double s_min = b11 > 0.0 ? 0.0 : 1.0;
    const double s_max = b22 > 0.0 ? 1.0 : 0.0;
    out.params_at_min = ControlParams(s_min, 0.0);
    out.params_at_max = ControlParams(s_max, 0.0);
    return out;
  }

  // det(A - lambda B) = detB lambda^2 - m lambda + detA
  const double detA = num.det();
  const double detB = den.det();
  const double m = a11 * b22 + a22 * b11 - 2.0 * (a12 * std::conj(b12)).real();
  const double disc = std::max(0.0, m * m - 4.0 * detA * detB);
  const double root = m + std::sqrt(disc);
  const bool singular = detB <= opts.singular_tol * trB * trB;

  auto vector_for = [&](double lambda) {
    const double m11 = a11 - lambda * b11;
    const double m22 = a22 - lambda * b22;
    const complex m12 = a12 - lambda * b12;
    auto [c1, c2] = null_vector(m11, m22, m12);
    if (c1 == complex{} && c2 == complex{})
      c1 = 1.0;
    return params_from_vector(c1, c2);
  };

  const double scale = num.trace() / trB;
  out.min_value = root > 0.0 ? clamp_min_eigen(2.0 * detA / root, scale, num.channel) : 0.0;
  out.params_at_min = vector_for(out.min_value);

  if (singular) {
    out.unbounded_max = true;
    out.max_value = std::numeric_limits<double>::infinity();
    auto [c1, c2] = null_vector(b11, b22, b12);
    out.params_at_max = params_from_vector(c1, c2);
  } else {
    out.max_value = root / (2.0 * detB);
    out.params_at_max = vector_for(out.max_value);
  }
  return out;
}

std::pair<double, double> noncoherent_limits(const XsecMatrix& m) {
  return {m.sigma11, m.sigma22};
}

OracleResult grid_oracle(const XsecMatrix& num, const std::optional<XsecMatrix>& den,
                         std::size_t n_s, std::size_t n_phi, int threads) {
  if (n_s < 2 || n_phi < 2)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("oracle lattice {} x {} too small (need >= 2 x 2)", n_s, n_phi));
  check_psd(num);
  if (den) {
    if (!(den->trace() > 0.0))
      throw Error(ErrorKind::ZeroDenominator,
                  fmt::format("denominator channel '{}' has zero trace", den->channel));
    check_psd(*den);
  }

  const auto num_terms = form_terms(num);
  const auto den_terms = den ? form_terms(*den) : kernels::FormTerms{};
  const kernels::FormTerms* den_ptr = den ? &den_terms : nullptr;
  const auto e = threads > 0 ? kernels::lattice_extrema_parallel(num_terms, den_ptr, n_s, n_phi, threads)
                             : kernels::lattice_extrema_serial(num_terms, den_ptr, n_s, n_phi);
  if (e.evaluated == 0)
    throw Error(ErrorKind::ZeroDenominator, "denominator vanishes on every lattice point");

  auto lattice_params = [&](std::size_t i, std::size_t j) {
    return ControlParams(static_cast<double>(i) / static_cast<double>(n_s - 1),
                         constants::two_pi * static_cast<double>(j) / static_cast<double>(n_phi));
  };
  OracleResult out;
  out.skipped = e.skipped;
  out.range.min_value = e.min_value;
  out.range.max_value = e.max_value;
  out.range.params_at_min = lattice_params(e.min_s, e.min_phi);
  out.range.params_at_max = lattice_params(e.max_s, e.max_phi);
  out.range.degenerate = e.min_value == e.max_value;
  return out;
}

} // namespace cohres

#pragma once

// Independent reference computations used by the tests. None of these call
// the code paths they are used to check.

#include "cohres/constants.hpp"
#include "cohres/xsection.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace cohres::testing {

/// c^H M c with c1 = sqrt(1-s), c2 = sqrt(s) e^{i phi}, by explicit complex
/// matrix-vector products.
inline double quadratic_form(const XsecMatrix& m, double s, double phi) {
  const complex c1 = std::sqrt(1.0 - s);
  const complex c2 = std::polar(std::sqrt(s), phi);
  const complex mc1 = m.sigma11 * c1 + m.sigma12 * c2;
  const complex mc2 = std::conj(m.sigma12) * c1 + m.sigma22 * c2;
  return (std::conj(c1) * mc1 + std::conj(c2) * mc2).real();
}

/// Exact sum_k w_k P(cos th_k)^2 for a Gauss-Legendre grid of sufficient
/// order: 2 pi * sum_l c_l^2 * 2 / (2l + 1).
inline double legendre_norm_exact(const std::vector<double>& shape) {
  double sum = 0.0;
  for (std::size_t l = 0; l < shape.size(); ++l)
    sum += shape[l] * shape[l] * 2.0 / (2.0 * static_cast<double>(l) + 1.0);
  return constants::two_pi * sum;
}

/// P_l(x) from the explicit low-order polynomials.
inline double legendre_explicit(int l, double x) {
  switch (l) {
  case 0: return 1.0;
  case 1: return x;
  case 2: return 0.5 * (3 * x * x - 1);
  case 3: return 0.5 * (5 * x * x * x - 3 * x);
  case 4: return (35 * std::pow(x, 4) - 30 * x * x + 3) / 8.0;
  default: return std::nan("");
  }
}

/// Bisection for f(x) = target on [lo, hi] where f(lo) and f(hi) straddle it.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
                     double tol) {
  double flo = f(lo) - target;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi)
      break;  // bracket is down to adjacent doubles
    const double fm = f(mid) - target;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Index of the largest element.
inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best])
      best = i;
  return best;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Phase distance on the circle.
inline double phase_diff(double a, double b) {
  double d = std::fmod(std::abs(a - b), constants::two_pi);
  return std::min(d, constants::two_pi - d);
}

} // namespace cohres::testing

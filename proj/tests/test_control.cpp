#include "doctest.h"

#include "cohres/constants.hpp"
#include "cohres/control.hpp"
#include "cohres/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace cohres;
using cohres::testing::Rng;

namespace {

XsecMatrix mat(double a, double d, complex b) {
  XsecMatrix m;
  m.sigma11 = a;
  m.sigma22 = d;
  m.sigma12 = b;
  return m;
}

// Gram matrix gamma gamma^H in the conj(f1) f2 convention.
XsecMatrix outer(complex g1, complex g2) {
  return mat(std::norm(g1), std::norm(g2), std::conj(g1) * g2);
}

// Full-rank denominator with bounded condition number.
XsecMatrix well_conditioned(Rng& rng) {
  for (;;) {
    const auto m = testing::random_psd(rng, 2);
    const double h = 0.5 * (m.sigma11 - m.sigma22);
    const double r = std::hypot(h, std::abs(m.sigma12));
    const double lmax = 0.5 * m.trace() + r, lmin = 0.5 * m.trace() - r;
    if (lmin >= 0.1 * lmax)
      return m;
  }
}

double ratio_qf(const XsecMatrix& a, const XsecMatrix& b, double s, double phi) {
  return testing::quadratic_form(a, s, phi) / testing::quadratic_form(b, s, phi);
}

// U^H M U for a 2x2 unitary U = [[u11, u12], [u21, u22]].
XsecMatrix transform(const XsecMatrix& m, const std::array<complex, 4>& u) {
  const complex M[2][2] = {{m.sigma11, m.sigma12}, {std::conj(m.sigma12), m.sigma22}};
  const complex U[2][2] = {{u[0], u[1]}, {u[2], u[3]}};
  complex R[2][2]{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          R[i][j] += std::conj(U[k][i]) * M[k][l] * U[l][j];
  return mat(R[0][0].real(), R[1][1].real(), R[0][1]);
}

std::array<complex, 4> random_unitary(Rng& rng) {
  const double t = testing::uniform(rng, 0.0, constants::pi / 2);
  const double a = testing::uniform(rng, 0.0, constants::two_pi);
  const double b = testing::uniform(rng, 0.0, constants::two_pi);
  const double g = testing::uniform(rng, 0.0, constants::two_pi);
  const complex ea = std::polar(1.0, a), eb = std::polar(1.0, b), eg = std::polar(1.0, g);
  return {ea * std::cos(t), -eb * std::sin(t) * eg, std::conj(eb) * std::sin(t),
          std::conj(ea) * std::cos(t) * eg};
}

// Control point reached by the vector U c(p).
ControlParams map_params(const std::array<complex, 4>& u, const ControlParams& p) {
  const complex c1 = std::sqrt(1.0 - p.s);
  const complex c2 = std::polar(std::sqrt(p.s), p.phi12);
  const complex v1 = u[0] * c1 + u[1] * c2;
  const complex v2 = u[2] * c1 + u[3] * c2;
  const double n = std::norm(v1) + std::norm(v2);
  const double phi = std::abs(v1) == 0.0 ? 0.0 : std::arg(v2 * std::conj(v1));
  return ControlParams(std::clamp(std::norm(v2) / n, 0.0, 1.0), phi);
}

} // namespace

TEST_CASE("sigma_extrema: no interference") {
  const auto r = sigma_extrema(mat(1, 3, 0));
  CHECK(r.min_value == 1.0);
  CHECK(r.max_value == 3.0);
  CHECK(r.params_at_min.s == 0.0);
  CHECK(r.params_at_max.s == 1.0);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("sigma_extrema: Schwartz equality gives complete control") {
  const auto m = mat(1, 4, std::polar(2.0, 0.3));
  const auto r = sigma_extrema(m);
  CHECK(r.min_value == 0.0);
  CHECK(r.max_value == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(r.params_at_min.s == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(testing::phase_diff(r.params_at_min.phi12, constants::pi - 0.3) < 1e-12);
  CHECK(r.params_at_max.s == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(testing::phase_diff(r.params_at_max.phi12, constants::two_pi - 0.3) < 1e-12);

  const auto o = grid_oracle(m, std::nullopt, 721, 721);
  CHECK(std::abs(o.range.min_value - r.min_value) <= 1e-5 * m.trace());
  CHECK(std::abs(o.range.max_value - r.max_value) <= 1e-5 * m.trace());
}

TEST_CASE("sigma_extrema: identity is degenerate with canonical params") {
  const auto r = sigma_extrema(mat(2, 2, 0));
  CHECK(r.degenerate);
  CHECK(r.min_value == 2.0);
  CHECK(r.max_value == 2.0);
  CHECK(r.params_at_min.s == 0.0);
  CHECK(r.params_at_min.phi12 == 0.0);
  CHECK(r.params_at_max.s == 1.0);
  CHECK(r.params_at_max.phi12 == 0.0);
}

TEST_CASE("sigma_extrema: eigenvalue sum for extrema 0.0850 and 2.193") {
  // Extrema 0.0850 and 2.193 must sum to sigma11 + sigma22 = 2.278.
  const double a = 1.2, d = 2.278 - 1.2;
  const double b = std::sqrt(a * d - 0.0850 * 2.193);
  const auto r = sigma_extrema(mat(a, d, std::polar(b, 1.1)));
  CHECK(r.min_value == doctest::Approx(0.0850).epsilon(1e-12));
  CHECK(r.max_value == doctest::Approx(2.193).epsilon(1e-12));
  CHECK(r.min_value + r.max_value == doctest::Approx(2.278).epsilon(1e-12));
}

TEST_CASE("sigma_extrema: trace and determinant identities, params reproduce values") {
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const auto m = testing::random_psd(rng, testing::uniform_int(rng, 2, 4));
    const auto r = sigma_extrema(m);
    CHECK(testing::rel_diff(r.min_value + r.max_value, m.trace()) <= 1e-12);
    CHECK(testing::rel_diff(r.min_value * r.max_value, m.det()) <= 1e-12);
    CHECK(r.min_value <= r.max_value);
    const double at_min = testing::quadratic_form(m, r.params_at_min.s, r.params_at_min.phi12);
    const double at_max = testing::quadratic_form(m, r.params_at_max.s, r.params_at_max.phi12);
    CHECK(std::abs(at_min - r.min_value) <= 1e-9 * m.trace());
    CHECK(testing::rel_diff(at_max, r.max_value) <= 1e-9);
  }
}

TEST_CASE("sigma_extrema agrees with the lattice oracle") {
  Rng rng(32);
  for (int i = 0; i < 60; ++i) {
    const auto m = testing::random_psd(rng, testing::uniform_int(rng, 1, 3));
    const auto r = sigma_extrema(m);
    const auto o = grid_oracle(m, std::nullopt, 721, 721);
    CHECK(std::abs(o.range.min_value - r.min_value) <= 1e-4 * m.trace());
    CHECK(std::abs(o.range.max_value - r.max_value) <= 1e-4 * m.trace());
    CHECK(evaluate_sigma(m, r.params_at_min) <= o.range.min_value + 1e-12 * m.trace());
    CHECK(evaluate_sigma(m, r.params_at_max) >= o.range.max_value - 1e-12 * m.trace());
  }
}

TEST_CASE("complete control iff Schwartz equality") {
  Rng rng(33);
  for (int i = 0; i < 400; ++i) {
    const int rank = i % 2 == 0 ? 1 : 2;
    const auto m = testing::random_psd(rng, rank);
    const bool complete = sigma_extrema(m).min_value <= 1e-10 * m.trace();
    const bool equality = schwartz_ratio(m) >= 1.0 - 1e-8;
    CHECK(complete == equality);
    if (rank == 1)
      CHECK(complete);
  }
}

TEST_CASE("ratio_extrema: diagonal example") {
  const auto r = ratio_extrema(mat(1, 4, 0), mat(1, 1, 0));
  CHECK(r.min_value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.max_value == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(r.params_at_min.s == 0.0);
  CHECK(r.params_at_max.s == 1.0);
  CHECK_FALSE(r.degenerate);
  CHECK_FALSE(r.unbounded_max);
  const auto o = grid_oracle(mat(1, 4, 0), mat(1, 1, 0), 721, 721);
  CHECK(o.range.min_value == 1.0);
  CHECK(o.range.max_value == 4.0);
}

TEST_CASE("ratio_extrema: shared rank-1 resonance is degenerate") {
  const auto g = outer(1.0, complex{0, 1});
  auto a = g, b = g;
  a.sigma11 *= 2, a.sigma22 *= 2, a.sigma12 *= 2.0;
  b.sigma11 *= 0.5, b.sigma22 *= 0.5, b.sigma12 *= 0.5;
  const auto r = ratio_extrema(a, b);
  CHECK(r.degenerate);
  CHECK(r.min_value == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(r.max_value == doctest::Approx(4.0).epsilon(1e-15));
  const auto o = grid_oracle(a, b, 201, 201);
  CHECK(o.range.max_value - o.range.min_value <= 1e-10 * 4.0);
}

TEST_CASE("ratio_extrema: singular denominator gives an unbounded maximum") {
  const auto b = outer(1.0, std::polar(2.0, 0.4));
  const auto a = mat(1, 1, 0);
  const auto r = ratio_extrema(a, b);
  CHECK(r.unbounded_max);
  CHECK(std::isinf(r.max_value));
  CHECK(testing::quadratic_form(b, r.params_at_max.s, r.params_at_max.phi12) <= 1e-12 * b.trace());
  // min over the finite region is the reciprocal of the largest eigenvalue of B
  CHECK(r.min_value == doctest::Approx(1.0 / b.trace()).epsilon(1e-12));
  CHECK(testing::rel_diff(ratio_qf(a, b, r.params_at_min.s, r.params_at_min.phi12), r.min_value) <=
        1e-9);
}

TEST_CASE("ratio_extrema: singular tolerance is configurable") {
  const auto b = mat(1.0, 1.0, complex{1.0 - 1e-9, 0.0});
  const auto a = mat(1, 2, 0);
  CHECK_FALSE(ratio_extrema(a, b).unbounded_max);
  CHECK(ratio_extrema(a, b, RatioOptions{1e-6, 1e-10}).unbounded_max);
}

TEST_CASE("ratio_extrema: errors") {
  try {
    ratio_extrema(mat(1, 1, 0), mat(0, 0, 0));
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("ratio_extrema agrees with the lattice oracle") {
  Rng rng(34);
  for (int i = 0; i < 60; ++i) {
    const auto a = testing::random_psd(rng, testing::uniform_int(rng, 1, 3));
    const auto b = well_conditioned(rng);
    const auto r = ratio_extrema(a, b);
    const auto o = grid_oracle(a, b, 721, 721);
    const double scale = r.max_value;
    CHECK(std::abs(o.range.min_value - r.min_value) <= 1e-4 * scale);
    CHECK(std::abs(o.range.max_value - r.max_value) <= 1e-4 * scale);
    CHECK(evaluate_ratio(a, b, r.params_at_min) <= o.range.min_value * (1 + 1e-12));
    CHECK(evaluate_ratio(a, b, r.params_at_max) >= o.range.max_value * (1 - 1e-12));
  }
}

TEST_CASE("ratio_extrema: scaling and unitary invariance") {
  Rng rng(35);
  for (int i = 0; i < 200; ++i) {
    const auto a = testing::random_psd(rng, 2);
    const auto b = well_conditioned(rng);
    const auto r = ratio_extrema(a, b);

    const double alpha = std::exp(testing::uniform(rng, -3.0, 3.0));
    auto sa = a;
    sa.sigma11 *= alpha, sa.sigma22 *= alpha, sa.sigma12 *= alpha;
    const auto rs = ratio_extrema(sa, b);
    CHECK(testing::rel_diff(rs.min_value, alpha * r.min_value) <= 1e-12);
    CHECK(testing::rel_diff(rs.max_value, alpha * r.max_value) <= 1e-12);

    const auto u = random_unitary(rng);
    const auto ru = ratio_extrema(transform(a, u), transform(b, u));
    CHECK(testing::rel_diff(ru.min_value, r.min_value) <= 1e-10);
    CHECK(testing::rel_diff(ru.max_value, r.max_value) <= 1e-10);
    // Params transform with the basis: U c' is an optimum of the original problem.
    const auto pmin = map_params(u, ru.params_at_min);
    const auto pmax = map_params(u, ru.params_at_max);
    CHECK(testing::rel_diff(ratio_qf(a, b, pmin.s, pmin.phi12), r.min_value) <= 1e-9);
    CHECK(testing::rel_diff(ratio_qf(a, b, pmax.s, pmax.phi12), r.max_value) <= 1e-9);
  }
}

TEST_CASE("evaluate_ratio: division edge cases") {
  const auto b = mat(1, 0, 0);
  CHECK(std::isinf(evaluate_ratio(mat(1, 1, 0), b, ControlParams(1.0, 0.0))));
  try {
    evaluate_ratio(mat(1, 0, 0), b, ControlParams(1.0, 0.0));
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
  CHECK(evaluate_ratio(mat(2, 4, 0), mat(1, 1, 0), ControlParams(0.5, 0.0)) == 3.0);
}

TEST_CASE("noncoherent_limits") {
  CHECK(noncoherent_limits(mat(2.0, 0.5, complex{0.3, 0.1})) == std::pair{2.0, 0.5});
  CHECK(noncoherent_limits(mat(1, 1, 0)) == std::pair{1.0, 1.0});
}

TEST_CASE("grid_oracle: lattice conventions and arguments") {
  const auto o = grid_oracle(mat(1, 3, 0), std::nullopt, 11, 8);
  CHECK(o.range.min_value == 1.0);
  CHECK(o.range.max_value == 3.0);
  CHECK(o.range.params_at_min.s == 0.0);
  CHECK(o.range.params_at_max.s == 1.0);
  // Ties break toward the first phase index.
  CHECK(o.range.params_at_min.phi12 == 0.0);
  CHECK(o.range.params_at_max.phi12 == 0.0);
  CHECK(o.skipped == 0);
  CHECK_THROWS_AS(grid_oracle(mat(1, 3, 0), std::nullopt, 1, 8), Error);
  CHECK_THROWS_AS(grid_oracle(mat(1, 3, 0), std::nullopt, 8, 1), Error);
  CHECK_THROWS_AS(grid_oracle(mat(1, 3, 0), mat(0, 0, 0), 8, 8), Error);
  CHECK_THROWS_AS(grid_oracle(mat(1, 1, 2.0), std::nullopt, 8, 8), Error);
}

TEST_CASE("grid_oracle: serial and threaded runs agree") {
  Rng rng(36);
  for (int i = 0; i < 10; ++i) {
    const auto a = testing::random_psd(rng, 2);
    const auto b = testing::random_psd(rng, 1);
    const auto s = grid_oracle(a, b, 301, 257, 0);
    const auto p = grid_oracle(a, b, 301, 257, 4);
    CHECK(s.range.min_value == p.range.min_value);
    CHECK(s.range.max_value == p.range.max_value);
    CHECK(s.range.params_at_min.s == p.range.params_at_min.s);
    CHECK(s.range.params_at_min.phi12 == p.range.params_at_min.phi12);
    CHECK(s.range.params_at_max.s == p.range.params_at_max.s);
    CHECK(s.range.params_at_max.phi12 == p.range.params_at_max.phi12);
    CHECK(s.skipped == p.skipped);
  }
}

TEST_CASE("ControlRange::separation wraps the phase") {
  ControlRange r;
  r.params_at_min = ControlParams(0.2, 0.1);
  r.params_at_max = ControlParams(0.2, constants::two_pi - 0.1);
  CHECK(r.separation() == doctest::Approx(0.2 / constants::two_pi).epsilon(1e-12));
  r.params_at_max = ControlParams(0.5, 0.1);
  CHECK(r.separation() == doctest::Approx(0.3).epsilon(1e-12));
}

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace cohres::kernels {

/// Quadratic-form coefficients of one channel on the oracle lattice:
/// sigma(s, phi) = (1-s) d1 + s d2 + 2 sqrt(s(1-s)) mag cos(arg + phi).
struct FormTerms {
  double d1 = 0.0;
  double d2 = 0.0;
  double mag = 0.0;
  double arg = 0.0;
  double slack = 0.0;  // clamp negative roundoff above -slack to zero
};

struct LatticeExtrema {
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t min_s = 0, min_phi = 0;
  std::size_t max_s = 0, max_phi = 0;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
};

/// Serial reference: visits (s, phi) in lexicographic order, strict
/// comparisons keep the first extremum found.
LatticeExtrema lattice_extrema_serial(const FormTerms& num, const FormTerms* den,
                                      std::size_t n_s, std::size_t n_phi);

/// OpenMP kernel over s rows; per-row partials are merged in row order so the
/// result is bit-identical to the serial kernel.
LatticeExtrema lattice_extrema_parallel(const FormTerms& num, const FormTerms* den,
                                        std::size_t n_s, std::size_t n_phi, int threads);

/// Runs body(i) for i in [0, n). threads <= 0 is a plain loop; otherwise an
/// OpenMP loop capped at `threads` workers. Callers write results by index.
void for_each_index(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace cohres::kernels

#include "cohres/kernels.hpp"

#include "cohres/constants.hpp"


#include <cmath>
#include <exception>
#include <limits>
#include <vector>

namespace cohres::kernels {

namespace {

constexpr double tiny_denominator = 1e-300;

struct Trig {
  std::vector<double> num;
  std::vector<double> den;
};

Trig column_table(const FormTerms& num, const FormTerms* den, std::size_t n_phi) {
  Trig t;
  t.num.resize(n_phi);
  if (den)
    t.den.resize(n_phi);
  for (std::size_t j = 0; j < n_phi; ++j) {
    const double phi = constants::two_pi * static_cast<double>(j) / static_cast<double>(n_phi);
    t.num[j] = std::cos(num.arg + phi);
    if (den)
      t.den[j] = std::cos(den->arg + phi);
  }
  return t;
}

inline double form_value(const FormTerms& f, double a, double b, double c) {
  const double v = a + b * f.mag * c;
  return (v < 0.0 && v >= -f.slack) ? 0.0 : v;
}

LatticeExtrema empty_extrema() {
  LatticeExtrema e;
  e.min_value = std::numeric_limits<double>::infinity();
  e.max_value = -std::numeric_limits<double>::infinity();
  return e;
}

LatticeExtrema row_extrema(const FormTerms& num, const FormTerms* den, const Trig& trig,
                           std::size_t i, std::size_t n_s, std::size_t n_phi) {
  const double s = static_cast<double>(i) / static_cast<double>(n_s - 1);
  const double b = 2.0 * std::sqrt(s * (1.0 - s));
  const double a_num = (1.0 - s) * num.d1 + s * num.d2;
  const double a_den = den ? (1.0 - s) * den->d1 + s * den->d2 : 0.0;

  LatticeExtrema e = empty_extrema();
  for (std::size_t j = 0; j < n_phi; ++j) {
    double v = form_value(num, a_num, b, trig.num[j]);
    if (den) {
      const double d = form_value(*den, a_den, b, trig.den[j]);
      if (d < tiny_denominator) {
        ++e.skipped;
        continue;
      }
      v /= d;
    }
    ++e.evaluated;
    if (v < e.min_value) {
      e.min_value = v;
      e.min_s = i;
      e.min_phi = j;
    }
    if (v > e.max_value) {
      e.max_value = v;
      e.max_s = i;
      e.max_phi = j;
    }
  }
  return e;
}

void merge(LatticeExtrema& acc, const LatticeExtrema& row) {
  acc.skipped += row.skipped;
  acc.evaluated += row.evaluated;
  if (row.min_value < acc.min_value) {
    acc.min_value = row.min_value;
    acc.min_s = row.min_s;
    acc.min_phi = row.min_phi;
  }
  if (row.max_value > acc.max_value) {
    acc.max_value = row.max_value;
    acc.max_s = row.max_s;
    acc.max_phi = row.max_phi;
  }
}

} // namespace

LatticeExtrema lattice_extrema_serial(const FormTerms& num, const FormTerms* den,
                                      std::size_t n_s, std::size_t n_phi) {
  const Trig trig = column_table(num, den, n_phi);
  LatticeExtrema acc = empty_extrema();
  for (std::size_t i = 0; i < n_s; ++i)
    merge(acc, row_extrema(num, den, trig, i, n_s, n_phi));
  return acc;
}

LatticeExtrema lattice_extrema_parallel(const FormTerms& num, const FormTerms* den,
                                        std::size_t n_s, std::size_t n_phi, int threads) {
  const Trig trig = column_table(num, den, n_phi);
  std::vector<LatticeExtrema> rows(n_s);
  const auto n = static_cast<long long>(n_s);
#pragma omp parallel for num_threads(threads > 0 ? threads : 1) schedule(static)
  for (long long i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] =
        row_extrema(num, den, trig, static_cast<std::size_t>(i), n_s, n_phi);

  LatticeExtrema acc = empty_extrema();
  for (const auto& r : rows)
    merge(acc, r);
  return acc;
}

void for_each_index(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 0) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace cohres::kernels

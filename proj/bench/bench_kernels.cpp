// Serial reference vs OpenMP kernels: oracle lattice and energy scan.

#include "cohres/io.hpp"
#include "cohres/kernels.hpp"
#include "cohres/scan.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <vector>

using namespace cohres;

namespace {

// Best of `reps` wall-clock timings, in milliseconds.
double best_ms(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count());
  }
  return best;
}

} // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 721;
  const int max_threads = omp_get_max_threads();
  fmt::print("hardware threads: {}\n", max_threads);

  const kernels::FormTerms num{1.3, 0.7, 0.8, 0.4, 1e-10};
  const kernels::FormTerms den{0.9, 1.1, 0.6, -1.2, 1e-10};
  volatile double sink = 0.0;

  fmt::print("\nratio lattice {} x {}\n", n, n);
  const double serial =
      best_ms(5, [&] { sink = kernels::lattice_extrema_serial(num, &den, n, n).max_value; });
  fmt::print("  serial      {:9.3f} ms\n", serial);
  for (int t = 1; t <= std::max(4, max_threads); t *= 2) {
    const double ms = best_ms(
        5, [&] { sink = kernels::lattice_extrema_parallel(num, &den, n, n, t).max_value; });
    fmt::print("  threads {:2d}  {:9.3f} ms  speedup {:.2f}\n", t, ms, serial / ms);
  }

  const auto scenario = io::read_scenario(COHRES_DATA_DIR "/fhd_like.json");
  const auto energies = energy_grid(0.25, 0.31, 0.0005);
  ScanOptions opts;
  opts.pair = {"D+HF", "H+DF"};
  fmt::print("\nenergy scan, {} energies\n", energies.size());
  opts.threads = 0;
  const double scan_serial =
      best_ms(3, [&] { sink = energy_scan(scenario, energies, opts).back().R; });
  fmt::print("  serial      {:9.3f} ms\n", scan_serial);
  for (int t = 1; t <= std::max(4, max_threads); t *= 2) {
    opts.threads = t;
    const double ms = best_ms(3, [&] { sink = energy_scan(scenario, energies, opts).back().R; });
    fmt::print("  threads {:2d}  {:9.3f} ms  speedup {:.2f}\n", t, ms, scan_serial / ms);
  }
  (void)sink;
}

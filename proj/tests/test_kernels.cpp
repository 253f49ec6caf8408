#include "doctest.h"

#include "cohres/constants.hpp"
#include "cohres/kernels.hpp"
#include "support/generators.hpp"

#include <atomic>
#include <stdexcept>
#include <vector>

using namespace cohres;
using namespace cohres::kernels;
using cohres::testing::Rng;

namespace {

FormTerms terms(const XsecMatrix& m) {
  return {m.sigma11, m.sigma22, std::abs(m.sigma12), std::arg(m.sigma12), 1e-10 * m.trace()};
}

void check_same(const LatticeExtrema& a, const LatticeExtrema& b) {
  CHECK(a.min_value == b.min_value);
  CHECK(a.max_value == b.max_value);
  CHECK(a.min_s == b.min_s);
  CHECK(a.min_phi == b.min_phi);
  CHECK(a.max_s == b.max_s);
  CHECK(a.max_phi == b.max_phi);
  CHECK(a.skipped == b.skipped);
  CHECK(a.evaluated == b.evaluated);
}

} // namespace

TEST_CASE("serial and parallel lattice kernels are bit-identical") {
  Rng rng(41);
  for (int i = 0; i < 30; ++i) {
    const auto num = terms(testing::random_psd(rng, testing::uniform_int(rng, 1, 3)));
    const auto den = terms(testing::random_psd(rng, testing::uniform_int(rng, 1, 2)));
    const std::size_t ns = static_cast<std::size_t>(testing::uniform_int(rng, 2, 300));
    const std::size_t np = static_cast<std::size_t>(testing::uniform_int(rng, 2, 300));
    const auto serial = lattice_extrema_serial(num, nullptr, ns, np);
    for (int threads : {1, 2, 3, 8})
      check_same(serial, lattice_extrema_parallel(num, nullptr, ns, np, threads));
    const auto serial_r = lattice_extrema_serial(num, &den, ns, np);
    for (int threads : {1, 2, 3, 8})
      check_same(serial_r, lattice_extrema_parallel(num, &den, ns, np, threads));
    CHECK(serial.evaluated == ns * np);
    CHECK(serial_r.evaluated + serial_r.skipped == ns * np);
  }
}

TEST_CASE("ties resolve toward the first lattice point") {
  FormTerms flat{1.0, 1.0, 0.0, 0.0, 0.0};
  const auto r = lattice_extrema_parallel(flat, nullptr, 17, 19, 4);
  CHECK(r.min_s == 0);
  CHECK(r.min_phi == 0);
  CHECK(r.max_s == 0);
  CHECK(r.max_phi == 0);
}

TEST_CASE("for_each_index visits every index once") {
  for (int threads : {0, 1, 4}) {
    std::vector<std::atomic<int>> hits(1000);
    for_each_index(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    bool all_once = true;
    for (auto& h : hits)
      all_once = all_once && h.load() == 1;
    CHECK(all_once);
  }
}

TEST_CASE("for_each_index propagates exceptions") {
  for (int threads : {0, 3}) {
    auto body = [](std::size_t i) {
      if (i == 7)
        throw std::runtime_error("boom");
    };
    CHECK_THROWS_WITH(for_each_index(20, threads, body), "boom");
  }
}

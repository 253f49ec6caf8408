#include "cohres/scan.hpp"

#include "cohres/errors.hpp"
#include "cohres/kernels.hpp"
#include "cohres/quadrature.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <limits>

namespace cohres {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double safe_ratio(double n, double d) {
  if (d > 0.0)
    return n / d;
  return n > 0.0 ? inf : std::numeric_limits<double>::quiet_NaN();
}

ChannelSummary summarize(const XsecMatrix& m) {
  const auto range = sigma_extrema(m);
  ChannelSummary c;
  c.sigma_min = range.min_value;
  c.sigma_max = range.max_value;
  std::tie(c.sigma11, c.sigma22) = noncoherent_limits(m);
  c.schwartz = schwartz_ratio(m);
  return c;
}

} // namespace

AngleGrid Scenario::grid() const { return gauss_legendre_angle_grid(grid_order); }

AmplitudeTable Scenario::table_at(double E) const {
  return synth_table(resonance, background, grid(), E, initial, mix);
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  auto out = validate_resonance(s.resonance);
  auto bg = validate_background(s.background);
  out.insert(out.end(), bg.begin(), bg.end());
  if (!(s.mix >= 0.0 && s.mix <= 1.0))
    out.push_back({"scenario.mix_range", "mix", fmt::format("mix {} outside [0, 1]", s.mix)});
  if (s.grid_order < 1)
    out.push_back({"scenario.grid_order", "grid_order", fmt::format("order {} < 1", s.grid_order)});
  for (int i = 0; i < 2; ++i) {
    auto v = validate_state(s.initial[i], fmt::format("initial_pair[{}]", i));
    out.insert(out.end(), v.begin(), v.end());
  }
  if (s.initial[0] == s.initial[1])
    out.push_back({"initial.distinct", "initial_pair", "initial states are identical"});
  if (s.initial[0].arrangement != s.initial[1].arrangement)
    out.push_back({"initial.shared_arrangement", "initial_pair", "arrangements differ"});
  for (const auto& [label, mass] : s.masses)
    if (!(mass > 0.0))
      out.push_back({"scenario.mass_positive", fmt::format("masses_amu.{}", label),
                     fmt::format("mass {}", mass)});
  return out;
}

ScanRow scan_row(const AmplitudeTable& t, const ScanOptions& opts) {
  const auto& [name_a, name_b] = opts.pair;
  XsecMatrix ma, mb;
  if (opts.angle) {
    const auto node = nearest_node(t.grid, *opts.angle);
    ma = diff_xsec_matrix(t, name_a, node);
    mb = diff_xsec_matrix(t, name_b, node);
  } else {
    ma = xsec_matrix(t, name_a);
    mb = xsec_matrix(t, name_b);
  }

  ScanRow row;
  row.energy = t.energy;
  row.a = summarize(ma);
  row.b = summarize(mb);
  row.ratio = ratio_extrema(ma, mb, opts.ratio);

  const double r0 = safe_ratio(ma.sigma11, mb.sigma11);
  const double r1 = safe_ratio(ma.sigma22, mb.sigma22);
  row.r_nc_min = std::min(r0, r1);
  row.r_nc_max = std::max(r0, r1);
  row.R = row.ratio.unbounded_max ? inf : safe_ratio(row.ratio.max_value, row.ratio.min_value);
  row.R_nc = safe_ratio(row.r_nc_max, row.r_nc_min);
  return row;
}

std::vector<ScanRow> energy_scan(const Scenario& s, const std::vector<double>& energies,
                                 const ScanOptions& opts) {
  if (energies.empty())
    throw Error(ErrorKind::InvalidArgument, "energy scan needs at least one energy");
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (!(energies[i] > energies[i - 1]))
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("scan energies not strictly increasing at index {}", i));
  if (auto v = validate_scenario(s); !v.empty())
    throw Error(ErrorKind::Validation,
                fmt::format("scenario invalid: {} at {}: {}", v.front().invariant,
                            v.front().location, v.front().detail));

  const AngleGrid grid = s.grid();
  std::vector<ScanRow> rows(energies.size());
  kernels::for_each_index(energies.size(), opts.threads, [&](std::size_t i) {
    const double E = energies[i];
    try {
      const auto t = synth_table(s.resonance, s.background, grid, E, s.initial, s.mix);
      rows[i] = scan_row(t, opts);
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("at E = {} eV: {}", E, e.what()));
    }
  });
  return rows;
}

std::vector<double> energy_grid(double emin, double emax, double step) {
  if (!(step > 0.0))
    throw Error(ErrorKind::NonPositive, fmt::format("energy step {} must be > 0", step));
  if (!(emax >= emin))
    throw Error(ErrorKind::InvalidArgument, fmt::format("emax {} < emin {}", emax, emin));
  const auto count = static_cast<std::size_t>(std::floor((emax - emin) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = emin + static_cast<double>(i) * step;
  return out;
}

int threads_from_env() {
  const char* v = std::getenv("COHRES_THREADS");
  if (!v || !*v)
    return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0)
    return 0;
  return static_cast<int>(n);
}

} // namespace cohres

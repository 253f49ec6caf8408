#pragma once

#include "cohres/control.hpp"
#include "cohres/resonance.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cohres {

/// A synthetic resonance + background model and everything needed to turn it
/// into amplitude tables.
struct Scenario {
  std::string name;
  ResonanceSpec resonance;
  BackgroundSpec background;
  double mix = 1.0;
  int grid_order = 64;
  std::array<ChannelState, 2> initial;
  std::map<std::string, double> masses;  // amu, keyed by species label
  double energy_offset = 0.0;            // eV; labelling only

  AngleGrid grid() const;
  AmplitudeTable table_at(double E) const;
};

std::vector<Violation> validate_scenario(const Scenario& s);

struct ChannelSummary {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double sigma11 = 0.0;
  double sigma22 = 0.0;
  double schwartz = 0.0;
};

struct ScanRow {
  double energy = 0.0;
  ChannelSummary a;
  ChannelSummary b;
  ControlRange ratio;     // r = sigma_A / sigma_B
  double r_nc_min = 0.0;  // min / max over s in {0, 1}
  double r_nc_max = 0.0;
  double R = 0.0;         // r_max / r_min
  double R_nc = 0.0;      // r_nc_max / r_nc_min
};

struct ScanOptions {
  std::pair<std::string, std::string> pair;
  std::optional<double> angle;  // radians; differential at the nearest node when set
  int threads = 0;              // 0 = serial
  RatioOptions ratio;
};

/// One row per energy, in input order regardless of thread count.
std::vector<ScanRow> energy_scan(const Scenario& s, const std::vector<double>& energies,
                                 const ScanOptions& opts);

/// Row for an already-built table (the per-energy body of energy_scan).
ScanRow scan_row(const AmplitudeTable& t, const ScanOptions& opts);

/// emin, emin + step, ... up to emax inclusive (with 1e-9 step slack).
std::vector<double> energy_grid(double emin, double emax, double step);

/// Thread count from COHRES_THREADS; unset or unparsable means serial.
int threads_from_env();

} // namespace cohres

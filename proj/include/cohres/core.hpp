#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cohres {

using complex = std::complex<double>;

/// One asymptotic scattering state: arrangement label plus (v, j, m).
struct ChannelState {
  std::string arrangement;
  int v = 0;
  int j = 0;
  int m = 0;

  bool operator==(const ChannelState&) const = default;
};

std::string describe(const ChannelState& s);

/// Product-angle quadrature. Weights carry the full solid-angle measure
/// (2*pi * sin(theta) dtheta), so a complete grid sums to 4*pi sr.
struct AngleGrid {
  std::vector<double> nodes;    // theta, radians, strictly increasing
  std::vector<double> weights;  // steradians

  std::size_t size() const noexcept { return nodes.size(); }
  bool operator==(const AngleGrid&) const = default;
};

/// Amplitudes into one product arrangement. Storage is state-major,
/// angle-minor with the two initial-state columns innermost:
///   amplitudes[(n * n_nodes + k) * 2 + i] = <q', n, theta_k | T | q, i>
struct ProductChannel {
  std::string arrangement;
  std::vector<ChannelState> states;
  std::vector<complex> amplitudes;

  std::size_t index(std::size_t state, std::size_t node, std::size_t n_nodes,
                    std::size_t column) const noexcept {
    return (state * n_nodes + node) * 2 + column;
  }
  bool operator==(const ProductChannel&) const = default;
};

/// Transition amplitudes from two degenerate initial states at one total
/// energy. Amplitudes are in Angstrom / sr^(1/2), so |f|^2 is a differential
/// cross section; no flux factors are applied anywhere downstream.
///
/// Only azimuthally symmetric amplitudes are representable (the grid has no
/// phi axis). That holds for initial pairs with m1 = m2; tables built from
/// m1 != m2 pairs need a phi-resolved grid and are not supported.
struct AmplitudeTable {
  double energy = 0.0;
  std::array<ChannelState, 2> initial;
  AngleGrid grid;
  std::vector<ProductChannel> channels;

  const ProductChannel& channel(std::string_view arrangement) const;
  bool has_channel(std::string_view arrangement) const noexcept;
  bool operator==(const AmplitudeTable&) const = default;
};

struct Violation {
  std::string invariant;  // short stable identifier, e.g. "grid.weight_sum"
  std::string location;
  std::string detail;
};

/// Checks every table and grid invariant. Violations are data: the report is
/// empty for a well-formed table.
std::vector<Violation> validate_table(const AmplitudeTable& t);
std::vector<Violation> validate_grid(const AngleGrid& g);
std::vector<Violation> validate_state(const ChannelState& s, std::string_view location);

/// Relative kinematics of the two superposed components at a shared total
/// energy. The centre-of-mass condition K1 = K2 is implied, not modelled.
struct SuperpositionKinematics {
  double e1 = 0.0;   // internal energies, eV
  double e2 = 0.0;
  double Ek1 = 0.0;  // relative kinetic energies, eV
  double Ek2 = 0.0;
  double E = 0.0;    // total energy, eV
  double mu = 0.0;   // reduced mass, amu
  double k1 = 0.0;   // wavenumbers, 1/Angstrom
  double k2 = 0.0;
};

SuperpositionKinematics kinematic_pair(double e1, double e2, double Ek1, double mu);

double reduced_mass(double m1, double m2);
double wavenumber(double kinetic_eV, double mu_amu);

} // namespace cohres

#pragma once

#include "cohres/core.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

namespace cohres {

/// Decay of the resonance into one final state: complex coupling times a real
/// Legendre expansion in cos(theta) for the angular distribution.
struct ExitCoupling {
  ChannelState state;
  complex coupling{};
  std::vector<double> shape{1.0};
};

struct ResonanceExits {
  std::string arrangement;
  std::vector<ExitCoupling> states;
};

/// Isolated Feshbach resonance with complex energy E_r = epsilon_r - i Gamma/2.
/// Couplings are energy independent over a scan.
struct ResonanceSpec {
  double epsilon_r = 0.0;    // eV
  double gamma_width = 0.0;  // eV, > 0
  std::array<complex, 2> entrance{};
  std::vector<ResonanceExits> exits;

  complex complex_energy() const noexcept { return {epsilon_r, -0.5 * gamma_width}; }
};

/// Direct (non-resonant) amplitude into one final state, linear in energy
/// about the reference energy: a(E) = amplitude + slope * (E - E_ref).
struct BackgroundTerm {
  ChannelState state;
  complex amplitude{};
  complex slope{};
  std::vector<double> shape{1.0};
  // Per-state override of the coupling to the two initial-state columns.
  std::optional<std::array<complex, 2>> column_weights;
};

struct BackgroundChannel {
  std::string arrangement;
  std::vector<BackgroundTerm> states;
};

struct BackgroundSpec {
  double reference_energy = 0.0;  // eV
  std::array<complex, 2> column_weights{complex{1.0, 0.0}, complex{1.0, 0.0}};
  std::vector<BackgroundChannel> channels;
};

std::vector<Violation> validate_resonance(const ResonanceSpec& r);
std::vector<Violation> validate_background(const BackgroundSpec& b);

/// 1 / (E - E_r) = 1 / (E - epsilon_r + i Gamma/2), in 1/eV.
complex breit_wigner_factor(double E, const ResonanceSpec& r);

enum class WidthLifetime { WidthToLifetime, LifetimeToWidth };

/// Gamma (eV) <-> tau (fs) through tau = hbar / Gamma.
double width_lifetime(double x, WidthLifetime direction);

/// Amplitude table for resonance + background at energy E:
///   f_{n,i} = mix * g'_n P_n(cos th) g_i BW(E)
///           + (1 - mix) * a_n(E) P'_n(cos th) w_{n,i}
/// Resonance exits and background channels must list the same states in the
/// same order.
AmplitudeTable synth_table(const ResonanceSpec& r, const BackgroundSpec& b, const AngleGrid& grid,
                           double E, const std::array<ChannelState, 2>& initial, double mix);

/// sum_k w_k P(cos th_k)^2 for an angular shape on the given grid.
double shape_norm(const std::vector<double>& shape, const AngleGrid& grid);

/// Resonance decay flux into an arrangement, sum_n |g'_n|^2 shape_norm_n.
double exit_flux(const ResonanceSpec& r, std::string_view arrangement, const AngleGrid& grid);

} // namespace cohres

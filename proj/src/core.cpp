#include "cohres/core.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace cohres {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::ChannelClosed: return "ChannelClosed";
  case ErrorKind::NonPositive: return "NonPositive";
  case ErrorKind::UnknownChannel: return "UnknownChannel";
  case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorKind::DegenerateChannel: return "DegenerateChannel";
  case ErrorKind::SpecMismatch: return "SpecMismatch";
  case ErrorKind::ZeroDenominator: return "ZeroDenominator";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::InternalConsistency: return "InternalConsistency";
  case ErrorKind::Io: return "Io";
  case ErrorKind::Malformed: return "Malformed";
  case ErrorKind::Validation: return "Validation";
  }
  return "Unknown";
}

std::string describe(const ChannelState& s) {
  return fmt::format("{}(v={},j={},m={})", s.arrangement, s.v, s.j, s.m);
}

const ProductChannel& AmplitudeTable::channel(std::string_view arrangement) const {
  for (const auto& c : channels)
    if (c.arrangement == arrangement)
      return c;
  throw Error(ErrorKind::UnknownChannel,
              fmt::format("no product channel '{}' in table", arrangement));
}

bool AmplitudeTable::has_channel(std::string_view arrangement) const noexcept {
  return std::any_of(channels.begin(), channels.end(),
                     [&](const ProductChannel& c) { return c.arrangement == arrangement; });
}

std::vector<Violation> validate_state(const ChannelState& s, std::string_view location) {
  std::vector<Violation> out;
  if (s.arrangement.empty())
    out.push_back({"state.arrangement_nonempty", std::string(location), "empty arrangement label"});
  if (s.v < 0 || s.j < 0)
    out.push_back({"state.quantum_numbers_nonnegative", std::string(location),
                   fmt::format("v={} j={}", s.v, s.j)});
  if (std::abs(s.m) > s.j)
    out.push_back({"state.m_bounded_by_j", std::string(location),
                   fmt::format("|m|={} > j={}", std::abs(s.m), s.j)});
  return out;
}

std::vector<Violation> validate_grid(const AngleGrid& g) {
  std::vector<Violation> out;
  if (g.nodes.empty()) {
    out.push_back({"grid.nonempty", "angle_grid", "no nodes"});
    return out;
  }
  if (g.nodes.size() != g.weights.size()) {
    out.push_back({"grid.length_match", "angle_grid",
                   fmt::format("{} nodes vs {} weights", g.nodes.size(), g.weights.size())});
    return out;
  }
  const bool single = g.nodes.size() == 1;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double th = g.nodes[k];
    const double w = g.weights[k];
    const auto loc = fmt::format("angle_grid[{}]", k);
    if (!std::isfinite(th) || !std::isfinite(w)) {
      out.push_back({"grid.finite", loc, "non-finite node or weight"});
      continue;
    }
    if (!(w > 0.0))
      out.push_back({"grid.weight_positive", loc, fmt::format("weight {}", w)});
    if (single) {
      if (th < 0.0 || th > constants::pi)
        out.push_back({"grid.node_range", loc, fmt::format("theta {} outside [0, pi]", th)});
    } else if (!(th > 0.0 && th < constants::pi)) {
      out.push_back({"grid.node_range", loc, fmt::format("theta {} outside (0, pi)", th)});
    }
    if (k > 0 && !(th > g.nodes[k - 1]))
      out.push_back({"grid.strictly_increasing", loc,
                     fmt::format("theta {} after {}", th, g.nodes[k - 1])});
  }
  if (!single) {
    double sum = 0.0;
    for (double w : g.weights)
      sum += w;
    if (std::abs(sum - constants::four_pi) > 1e-12 * constants::four_pi)
      out.push_back({"grid.weight_sum", "angle_grid",
                     fmt::format("weights sum to {:.17g}, expected 4*pi", sum)});
  }
  return out;
}

std::vector<Violation> validate_table(const AmplitudeTable& t) {
  std::vector<Violation> out;
  auto append = [&out](std::vector<Violation> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };

  if (!std::isfinite(t.energy))
    out.push_back({"table.energy_finite", "energy_eV", "non-finite energy"});

  append(validate_state(t.initial[0], "initial[0]"));
  append(validate_state(t.initial[1], "initial[1]"));
  if (t.initial[0] == t.initial[1])
    out.push_back({"initial.distinct", "initial", "initial states are identical"});
  if (t.initial[0].arrangement != t.initial[1].arrangement)
    out.push_back({"initial.shared_arrangement", "initial",
                   fmt::format("'{}' vs '{}'", t.initial[0].arrangement, t.initial[1].arrangement)});

  append(validate_grid(t.grid));
  const std::size_t n_nodes = t.grid.nodes.size();

  std::set<std::string> seen;
  for (std::size_t c = 0; c < t.channels.size(); ++c) {
    const auto& ch = t.channels[c];
    const auto loc = fmt::format("channels[{}]", c);
    if (ch.arrangement.empty())
      out.push_back({"channel.arrangement_nonempty", loc, "empty label"});
    if (!seen.insert(ch.arrangement).second)
      out.push_back({"channel.unique", loc, fmt::format("duplicate channel '{}'", ch.arrangement)});
    for (std::size_t n = 0; n < ch.states.size(); ++n) {
      const auto sloc = fmt::format("{}.states[{}]", loc, n);
      append(validate_state(ch.states[n], sloc));
      if (ch.states[n].arrangement != ch.arrangement)
        out.push_back({"channel.state_arrangement", sloc,
                       fmt::format("state labelled '{}' in channel '{}'",
                                   ch.states[n].arrangement, ch.arrangement)});
    }
    const std::size_t expected = ch.states.size() * n_nodes * 2;
    if (ch.amplitudes.size() != expected) {
      out.push_back({"channel.amplitude_shape", loc,
                     fmt::format("{} amplitudes, expected {} states x {} nodes x 2 = {}",
                                 ch.amplitudes.size(), ch.states.size(), n_nodes, expected)});
    }
    for (std::size_t a = 0; a < ch.amplitudes.size(); ++a) {
      if (!std::isfinite(ch.amplitudes[a].real()) || !std::isfinite(ch.amplitudes[a].imag())) {
        const std::size_t per_state = std::max<std::size_t>(n_nodes * 2, 1);
        out.push_back({"channel.amplitude_finite",
                       fmt::format("{}.amplitudes[state {}, node {}, column {}]", loc,
                                   a / per_state, (a % per_state) / 2, a % 2),
                       "non-finite amplitude"});
      }
    }
  }
  return out;
}

double reduced_mass(double m1, double m2) {
  if (!(m1 > 0.0) || !(m2 > 0.0))
    throw Error(ErrorKind::NonPositive, "masses must be positive");
  return m1 * m2 / (m1 + m2);
}

double wavenumber(double kinetic_eV, double mu_amu) {
  // k = sqrt(2 mu E) / hbar, with mu c^2 in eV and hbar c in eV*Angstrom
  const double mu_c2 = mu_amu * constants::amu_eV;
  const double hbar_c = constants::hbar_eV_s * constants::c_angstrom_per_s;
  return std::sqrt(2.0 * mu_c2 * kinetic_eV) / hbar_c;
}

SuperpositionKinematics kinematic_pair(double e1, double e2, double Ek1, double mu) {
  if (!(Ek1 > 0.0))
    throw Error(ErrorKind::NonPositive, fmt::format("kinetic energy Ek1 = {} must be > 0", Ek1));
  if (!(mu > 0.0))
    throw Error(ErrorKind::NonPositive, fmt::format("reduced mass {} must be > 0", mu));
  const double gap = e2 - e1;
  if (!(Ek1 + e1 > e2) || !(Ek1 - gap > 0.0))
    throw Error(ErrorKind::ChannelClosed,
                fmt::format("Ek1 + e1 = {} eV does not exceed e2 = {} eV", Ek1 + e1, e2));

  SuperpositionKinematics k;
  k.e1 = e1;
  k.e2 = e2;
  k.Ek1 = Ek1;
  k.Ek2 = Ek1 - gap;
  k.E = Ek1 + e1;
  k.mu = mu;
  k.k1 = wavenumber(k.Ek1, mu);
  k.k2 = wavenumber(k.Ek2, mu);
  return k;
}

} // namespace cohres

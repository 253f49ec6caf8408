#include "cohres/resonance.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"
#include "cohres/quadrature.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cohres {

namespace {

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x))
      return false;
  return true;
}

std::string join_violations(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty())
      out += "; ";
    out += fmt::format("{} at {}: {}", x.invariant, x.location, x.detail);
  }
  return out;
}

} // namespace

std::vector<Violation> validate_resonance(const ResonanceSpec& r) {
  std::vector<Violation> out;
  if (!std::isfinite(r.epsilon_r))
    out.push_back({"resonance.position_finite", "resonance.epsilon_r", "non-finite"});
  if (!(r.gamma_width > 0.0) || !std::isfinite(r.gamma_width))
    out.push_back({"resonance.width_positive", "resonance.gamma_width",
                   fmt::format("width {}", r.gamma_width)});
  if (!finite(r.entrance[0]) || !finite(r.entrance[1]))
    out.push_back({"resonance.entrance_finite", "resonance.entrance", "non-finite coupling"});
  bool any_exit = false;
  for (std::size_t c = 0; c < r.exits.size(); ++c) {
    for (std::size_t n = 0; n < r.exits[c].states.size(); ++n) {
      const auto& e = r.exits[c].states[n];
      const auto loc = fmt::format("resonance.exits[{}].states[{}]", c, n);
      if (!finite(e.coupling) || !finite(e.shape))
        out.push_back({"resonance.exit_finite", loc, "non-finite coupling or shape"});
      if (e.shape.empty())
        out.push_back({"resonance.shape_nonempty", loc, "empty angular shape"});
      if (e.coupling != complex{} && !e.shape.empty())
        any_exit = true;
    }
  }
  if (!any_exit)
    out.push_back({"resonance.exit_nonzero", "resonance.exits", "all exit couplings vanish"});
  return out;
}

std::vector<Violation> validate_background(const BackgroundSpec& b) {
  std::vector<Violation> out;
  if (!std::isfinite(b.reference_energy))
    out.push_back({"background.reference_finite", "background.reference_energy", "non-finite"});
  if (!finite(b.column_weights[0]) || !finite(b.column_weights[1]))
    out.push_back({"background.weights_finite", "background.column_weights", "non-finite"});
  for (std::size_t c = 0; c < b.channels.size(); ++c) {
    for (std::size_t n = 0; n < b.channels[c].states.size(); ++n) {
      const auto& t = b.channels[c].states[n];
      const auto loc = fmt::format("background.channels[{}].states[{}]", c, n);
      if (!finite(t.amplitude) || !finite(t.slope) || !finite(t.shape))
        out.push_back({"background.entry_finite", loc, "non-finite amplitude, slope or shape"});
      if (t.shape.empty())
        out.push_back({"background.shape_nonempty", loc, "empty angular shape"});
      if (t.column_weights && (!finite((*t.column_weights)[0]) || !finite((*t.column_weights)[1])))
        out.push_back({"background.weights_finite", loc, "non-finite column weight"});
    }
  }
  return out;
}

complex breit_wigner_factor(double E, const ResonanceSpec& r) {
  return 1.0 / complex(E - r.epsilon_r, 0.5 * r.gamma_width);
}

double width_lifetime(double x, WidthLifetime direction) {
  if (!(x > 0.0))
    throw Error(ErrorKind::NonPositive,
                fmt::format("{} must be positive, got {}",
                            direction == WidthLifetime::WidthToLifetime ? "width" : "lifetime", x));
  return constants::hbar_eV_fs / x;
}

double shape_norm(const std::vector<double>& shape, const AngleGrid& grid) {
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = legendre_series(shape, std::cos(grid.nodes[k]));
    sum += grid.weights[k] * p * p;
  }
  return sum;
}

double exit_flux(const ResonanceSpec& r, std::string_view arrangement, const AngleGrid& grid) {
  for (const auto& ex : r.exits) {
    if (ex.arrangement != arrangement)
      continue;
    double sum = 0.0;
    for (const auto& e : ex.states)
      sum += std::norm(e.coupling) * shape_norm(e.shape, grid);
    return sum;
  }
  throw Error(ErrorKind::UnknownChannel,
              fmt::format("resonance has no exit into '{}'", arrangement));
}

AmplitudeTable synth_table(const ResonanceSpec& r, const BackgroundSpec& b, const AngleGrid& grid,
                           double E, const std::array<ChannelState, 2>& initial, double mix) {
  if (!(mix >= 0.0 && mix <= 1.0))
    throw Error(ErrorKind::InvalidArgument, fmt::format("mix = {} outside [0, 1]", mix));
  if (auto v = validate_resonance(r); !v.empty())
    throw Error(ErrorKind::Validation, join_violations(v));
  if (auto v = validate_background(b); !v.empty())
    throw Error(ErrorKind::Validation, join_violations(v));
  if (r.exits.size() != b.channels.size())
    throw Error(ErrorKind::SpecMismatch,
                fmt::format("resonance lists {} product channels, background {}", r.exits.size(),
                            b.channels.size()));
  for (std::size_t c = 0; c < r.exits.size(); ++c) {
    const auto& ex = r.exits[c];
    const auto& bg = b.channels[c];
    if (ex.arrangement != bg.arrangement || ex.states.size() != bg.states.size())
      throw Error(ErrorKind::SpecMismatch,
                  fmt::format("product channel {}: resonance '{}' ({} states) vs background '{}' "
                              "({} states)",
                              c, ex.arrangement, ex.states.size(), bg.arrangement,
                              bg.states.size()));
    for (std::size_t n = 0; n < ex.states.size(); ++n)
      if (!(ex.states[n].state == bg.states[n].state))
        throw Error(ErrorKind::SpecMismatch,
                    fmt::format("channel '{}' state {}: {} vs {}", ex.arrangement, n,
                                describe(ex.states[n].state), describe(bg.states[n].state)));
  }

  const complex pole = breit_wigner_factor(E, r);
  const std::size_t n_nodes = grid.size();
  std::vector<double> cos_nodes(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k)
    cos_nodes[k] = std::cos(grid.nodes[k]);

  AmplitudeTable t;
  t.energy = E;
  t.initial = initial;
  t.grid = grid;
  t.channels.reserve(r.exits.size());
  for (std::size_t c = 0; c < r.exits.size(); ++c) {
    const auto& ex = r.exits[c];
    const auto& bg = b.channels[c];
    ProductChannel pc;
    pc.arrangement = ex.arrangement;
    pc.amplitudes.resize(ex.states.size() * n_nodes * 2);
    for (std::size_t n = 0; n < ex.states.size(); ++n) {
      pc.states.push_back(ex.states[n].state);
      const auto& term = bg.states[n];
      const auto& weights = term.column_weights ? *term.column_weights : b.column_weights;
      const complex direct = (1.0 - mix) * (term.amplitude + term.slope * (E - b.reference_energy));
      for (std::size_t k = 0; k < n_nodes; ++k) {
        const complex res =
            mix * ex.states[n].coupling * legendre_series(ex.states[n].shape, cos_nodes[k]) * pole;
        const complex bgk = direct * legendre_series(term.shape, cos_nodes[k]);
        const std::size_t base = pc.index(n, k, n_nodes, 0);
        pc.amplitudes[base] = res * r.entrance[0] + bgk * weights[0];
        pc.amplitudes[base + 1] = res * r.entrance[1] + bgk * weights[1];
      }
    }
    t.channels.push_back(std::move(pc));
  }

  if (auto v = validate_table(t); !v.empty())
    throw Error(ErrorKind::Validation, join_violations(v));
  return t;
}

} // namespace cohres

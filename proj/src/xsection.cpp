#include "cohres/xsection.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cohres {

namespace {

constexpr double diag_slack = 1e-12;
constexpr double sigma_slack = 1e-10;

double clamp_diagonal(double v, std::string_view channel) {
  if (v >= 0.0)
    return v;
  if (v >= -diag_slack)
    return 0.0;
  throw Error(ErrorKind::InternalConsistency,
              fmt::format("negative diagonal cross section {} in channel '{}'", v, channel));
}

struct Accum {
  double s11 = 0.0;
  double s22 = 0.0;
  complex s12{};

  void add(complex f1, complex f2, double w) {
    s11 += w * std::norm(f1);
    s22 += w * std::norm(f2);
    s12 += w * (std::conj(f1) * f2);
  }
};

const ProductChannel& checked_channel(const AmplitudeTable& t, std::string_view channel) {
  const auto& ch = t.channel(channel);
  if (ch.amplitudes.size() != ch.states.size() * t.grid.size() * 2)
    throw Error(ErrorKind::Validation,
                fmt::format("channel '{}' amplitude array does not match states x nodes x 2", channel));
  return ch;
}

XsecMatrix finish(std::string_view channel, std::optional<std::size_t> node, const Accum& a) {
  XsecMatrix m;
  m.channel = std::string(channel);
  m.node = node;
  m.sigma11 = clamp_diagonal(a.s11, channel);
  m.sigma22 = clamp_diagonal(a.s22, channel);
  m.sigma12 = a.s12;
  return m;
}

} // namespace

ControlParams::ControlParams(double s_, double phi) : s(s_), phi12(reduce_phase(phi)) {
  if (!(s >= 0.0 && s <= 1.0))
    throw Error(ErrorKind::InvalidArgument, fmt::format("s = {} outside [0, 1]", s_));
}

double reduce_phase(double phi) {
  double r = std::fmod(phi, constants::two_pi);
  if (r < 0.0)
    r += constants::two_pi;
  if (r >= constants::two_pi)
    r = 0.0;
  return r;
}

XsecMatrix xsec_matrix(const AmplitudeTable& t, std::string_view channel) {
  const auto& ch = checked_channel(t, channel);
  const std::size_t n_nodes = t.grid.size();
  Accum a;
  for (std::size_t n = 0; n < ch.states.size(); ++n) {
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const std::size_t base = ch.index(n, k, n_nodes, 0);
      a.add(ch.amplitudes[base], ch.amplitudes[base + 1], t.grid.weights[k]);
    }
  }
  return finish(channel, std::nullopt, a);
}

XsecMatrix diff_xsec_matrix(const AmplitudeTable& t, std::string_view channel, std::size_t node) {
  const auto& ch = checked_channel(t, channel);
  const std::size_t n_nodes = t.grid.size();
  if (node >= n_nodes)
    throw Error(ErrorKind::IndexOutOfRange,
                fmt::format("angle node {} out of range (grid has {})", node, n_nodes));
  Accum a;
  for (std::size_t n = 0; n < ch.states.size(); ++n) {
    const std::size_t base = ch.index(n, node, n_nodes, 0);
    a.add(ch.amplitudes[base], ch.amplitudes[base + 1], 1.0);
  }
  return finish(channel, node, a);
}

std::size_t nearest_node(const AngleGrid& g, double theta) {
  if (g.nodes.empty())
    throw Error(ErrorKind::IndexOutOfRange, "empty angle grid");
  std::size_t best = 0;
  for (std::size_t k = 1; k < g.nodes.size(); ++k)
    if (std::abs(g.nodes[k] - theta) < std::abs(g.nodes[best] - theta))
      best = k;
  return best;
}

double evaluate_sigma(const XsecMatrix& m, const ControlParams& p) {
  const double s = p.s;
  const double value = (1.0 - s) * m.sigma11 + s * m.sigma22 +
                       2.0 * std::sqrt(s * (1.0 - s)) * std::abs(m.sigma12) *
                           std::cos(std::arg(m.sigma12) + p.phi12);
  if (value >= 0.0)
    return value;
  if (value >= -sigma_slack * m.trace())
    return 0.0;
  throw Error(ErrorKind::InternalConsistency,
              fmt::format("controlled cross section {} < 0 for channel '{}' (matrix not PSD)",
                          value, m.channel));
}

double schwartz_ratio(const XsecMatrix& m) {
  if (!(m.sigma11 > 0.0) || !(m.sigma22 > 0.0))
    throw Error(ErrorKind::DegenerateChannel,
                fmt::format("Schwartz ratio undefined for channel '{}': sigma11 = {}, sigma22 = {}",
                            m.channel, m.sigma11, m.sigma22));
  const double r = std::abs(m.sigma12) / std::sqrt(m.sigma11 * m.sigma22);
  if (r > 1.0 + sigma_slack)
    throw Error(ErrorKind::InternalConsistency,
                fmt::format("Schwartz ratio {} > 1 for channel '{}'", r, m.channel));
  return std::min(r, 1.0);
}

} // namespace cohres

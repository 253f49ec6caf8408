#include "cohres/cli.hpp"

#include "cohres/constants.hpp"
#include "cohres/control.hpp"
#include "cohres/errors.hpp"
#include "cohres/io.hpp"
#include "cohres/scan.hpp"
#include "cohres/xsection.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

namespace cohres::cli {

namespace {

constexpr double deg = 180.0 / constants::pi;

using io::format_number;

std::string at(const ControlParams& p) {
  return fmt::format("s {} phi12_deg {}", format_number(p.s), format_number(p.phi12 * deg));
}

struct Selection {
  XsecMatrix num;
  std::optional<XsecMatrix> den;
};

// Matrices for the chosen channels, integral or at the node nearest angle_deg.
Selection select(const AmplitudeTable& t, const std::string& num, const std::string& den,
                 const std::optional<double>& angle_deg, std::ostream& out) {
  Selection sel;
  if (angle_deg) {
    const auto node = nearest_node(t.grid, *angle_deg / deg);
    out << fmt::format("node {} theta_deg {}\n", node, format_number(t.grid.nodes[node] * deg));
    sel.num = diff_xsec_matrix(t, num, node);
    if (!den.empty())
      sel.den = diff_xsec_matrix(t, den, node);
  } else {
    sel.num = xsec_matrix(t, num);
    if (!den.empty())
      sel.den = xsec_matrix(t, den);
  }
  return sel;
}

void print_range(std::ostream& out, const char* label, const ControlRange& r) {
  out << fmt::format("{}_min {} {}\n", label, format_number(r.min_value), at(r.params_at_min));
  out << fmt::format("{}_max {} {}\n", label, format_number(r.max_value), at(r.params_at_max));
  out << fmt::format("degenerate {}\n", r.degenerate ? "true" : "false");
  out << fmt::format("unbounded_max {}\n", r.unbounded_max ? "true" : "false");
  out << fmt::format("separation {}\n", format_number(r.separation()));
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-state coherent control of collisional cross sections", "cohres"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write the amplitude table of a scenario at one energy");
  std::string config_path, out_path;
  double energy = 0.0;
  synth->add_option("--config", config_path, "scenario JSON")->required();
  synth->add_option("--energy", energy, "total energy (eV)")->required();
  synth->add_option("--out", out_path, "output amplitude file")->required();

  // control
  auto* control = app.add_subcommand("control", "extrema of a cross section or a channel ratio");
  std::string table_path, num_channel, den_channel;
  std::optional<double> angle_deg;
  std::size_t oracle_n = 0;
  RatioOptions ratio_opts;
  control->add_option("--table", table_path, "amplitude file")->required();
  control->add_option("--num", num_channel, "product channel (numerator)")->required();
  control->add_option("--den", den_channel, "denominator channel; omit for the bare cross section");
  control->add_option("--angle", angle_deg, "differential at the grid node nearest this angle (deg)");
  control->add_option("--oracle", oracle_n, "also run an N x N lattice oracle")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  control->add_option("--tol-singular", ratio_opts.singular_tol,
                      "denominator singularity threshold: det B <= tol * trace(B)^2")
      ->check(CLI::NonNegativeNumber);

  // schwartz
  auto* schwartz = app.add_subcommand("schwartz", "Schwartz ratio |s12| / sqrt(s11 s22)");
  std::string schwartz_channel;
  schwartz->add_option("--table", table_path, "amplitude file")->required();
  schwartz->add_option("--channel", schwartz_channel, "product channel")->required();
  schwartz->add_option("--angle", angle_deg, "differential at the grid node nearest this angle (deg)");

  // scan
  auto* scan = app.add_subcommand("scan", "energy scan of coherent and non-coherent extrema (CSV)");
  double emin = 0.0, emax = 0.0, estep = 0.0;
  std::string pair_text, scan_out;
  scan->add_option("--config", config_path, "scenario JSON")->required();
  scan->add_option("--emin", emin, "first energy (eV)")->required();
  scan->add_option("--emax", emax, "last energy (eV)")->required();
  scan->add_option("--step", estep, "energy step (eV)")->required();
  scan->add_option("--pair", pair_text, "channel pair A,B for the ratio A/B")->required();
  scan->add_option("--out", scan_out, "CSV path ('-' for stdout)")->required();
  scan->add_option("--angle", angle_deg, "differential at the grid node nearest this angle (deg)");
  scan->add_option("--tol-singular", ratio_opts.singular_tol, "denominator singularity threshold")
      ->check(CLI::NonNegativeNumber);

  // validate
  auto* validate = app.add_subcommand("validate", "check an amplitude file against every invariant");
  validate->add_option("--table", table_path, "amplitude file")->required();

  // kinematics
  auto* kin = app.add_subcommand("kinematics", "relative kinematics of the superposed pair");
  double e1 = 0.0, e2 = 0.0, ek1 = 0.0;
  std::optional<double> mu;
  std::string masses_text;
  kin->add_option("--e1", e1, "internal energy of state 1 (eV)")->required();
  kin->add_option("--e2", e2, "internal energy of state 2 (eV)")->required();
  kin->add_option("--ek1", ek1, "relative kinetic energy of component 1 (eV)")->required();
  auto* mu_opt = kin->add_option("--mu", mu, "reduced mass (amu)");
  auto* cfg_opt = kin->add_option("--config", config_path, "scenario JSON with masses_amu");
  auto* masses_opt = kin->add_option("--masses", masses_text, "two mass labels from the config, e.g. F,HD");
  mu_opt->excludes(cfg_opt);
  cfg_opt->needs(masses_opt);
  masses_opt->needs(cfg_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      const auto scenario = io::read_scenario(config_path);
      io::write_table(scenario.table_at(energy), out_path);
      out << fmt::format("wrote {} (E = {} eV)\n", out_path, format_number(energy));
    } else if (*control) {
      const auto t = io::read_table(table_path);
      out << fmt::format("energy_eV {}\n", format_number(t.energy));
      const auto sel = select(t, num_channel, den_channel, angle_deg, out);
      if (sel.den) {
        out << fmt::format("objective ratio {}/{} {}\n", num_channel, den_channel,
                           angle_deg ? "differential" : "integral");
        const auto r = ratio_extrema(sel.num, *sel.den, ratio_opts);
        print_range(out, "r", r);
        const auto [a0, a1] = noncoherent_limits(sel.num);
        const auto [b0, b1] = noncoherent_limits(*sel.den);
        const double r0 = a0 / b0, r1 = a1 / b1;
        out << fmt::format("r_nc {} {}\n", format_number(r0), format_number(r1));
        out << fmt::format("R {}\n", format_number(r.max_value / r.min_value));
        out << fmt::format("R_nc {}\n", format_number(std::max(r0, r1) / std::min(r0, r1)));
        if (oracle_n > 0) {
          const auto o = grid_oracle(sel.num, sel.den, oracle_n, oracle_n, threads_from_env());
          out << fmt::format("oracle_r_min {} {}\n", format_number(o.range.min_value), at(o.range.params_at_min));
          out << fmt::format("oracle_r_max {} {}\n", format_number(o.range.max_value), at(o.range.params_at_max));
          out << fmt::format("oracle_skipped {}\n", o.skipped);
        }
      } else {
        out << fmt::format("objective sigma {} {}\n", num_channel,
                           angle_deg ? "differential" : "integral");
        const auto r = sigma_extrema(sel.num);
        print_range(out, "sigma", r);
        const auto [s0, s1] = noncoherent_limits(sel.num);
        out << fmt::format("sigma_nc {} {}\n", format_number(s0), format_number(s1));
        if (oracle_n > 0) {
          const auto o = grid_oracle(sel.num, std::nullopt, oracle_n, oracle_n, threads_from_env());
          out << fmt::format("oracle_sigma_min {} {}\n", format_number(o.range.min_value), at(o.range.params_at_min));
          out << fmt::format("oracle_sigma_max {} {}\n", format_number(o.range.max_value), at(o.range.params_at_max));
        }
      }
    } else if (*schwartz) {
      const auto t = io::read_table(table_path);
      const auto sel = select(t, schwartz_channel, "", angle_deg, out);
      out << fmt::format("channel {}\n", schwartz_channel);
      out << fmt::format("schwartz {}\n", format_number(schwartz_ratio(sel.num)));
    } else if (*scan) {
      const auto comma = pair_text.find(',');
      if (comma == std::string::npos || comma == 0 || comma + 1 == pair_text.size()) {
        err << "cohres: --pair expects two channel labels separated by a comma\n";
        return 2;
      }
      const auto scenario = io::read_scenario(config_path);
      ScanOptions opts;
      opts.pair = {pair_text.substr(0, comma), pair_text.substr(comma + 1)};
      if (angle_deg)
        opts.angle = *angle_deg / deg;
      opts.threads = threads_from_env();
      opts.ratio = ratio_opts;
      const auto rows = energy_scan(scenario, energy_grid(emin, emax, estep), opts);
      if (scan_out == "-") {
        io::write_scan_csv(rows, out);
      } else {
        std::ofstream f(scan_out, std::ios::binary | std::ios::trunc);
        if (!f)
          throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", scan_out));
        io::write_scan_csv(rows, f);
        f.close();
        if (!f)
          throw Error(ErrorKind::Io, fmt::format("write error on '{}'", scan_out));
        out << fmt::format("wrote {} rows to {}\n", rows.size(), scan_out);
      }
    } else if (*validate) {
      io::read_table(table_path);
      out << "valid\n";
    } else if (*kin) {
      double reduced = 0.0;
      if (mu) {
        reduced = *mu;
      } else if (!masses_text.empty()) {
        const auto scenario = io::read_scenario(config_path);
        const auto comma = masses_text.find(',');
        if (comma == std::string::npos) {
          err << "cohres: --masses expects two labels separated by a comma\n";
          return 2;
        }
        const auto lookup = [&](const std::string& label) {
          auto it = scenario.masses.find(label);
          if (it == scenario.masses.end())
            throw Error(ErrorKind::InvalidArgument, fmt::format("no mass for '{}' in config", label));
          return it->second;
        };
        reduced = reduced_mass(lookup(masses_text.substr(0, comma)), lookup(masses_text.substr(comma + 1)));
      } else {
        err << "cohres: kinematics needs --mu or --config with --masses\n";
        return 2;
      }
      const auto k = kinematic_pair(e1, e2, ek1, reduced);
      out << fmt::format("E {}\n", format_number(k.E));
      out << fmt::format("Ek1 {}\nEk2 {}\n", format_number(k.Ek1), format_number(k.Ek2));
      out << fmt::format("mu_amu {}\n", format_number(k.mu));
      out << fmt::format("k1 {}\nk2 {}\n", format_number(k.k1), format_number(k.k2));
    }
  } catch (const Error& e) {
    err << fmt::format("cohres: {}: {}\n", to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    err << fmt::format("cohres: {}\n", e.what());
    return 1;
  }
  return 0;
}

} // namespace cohres::cli

#include "cohres/io.hpp"

#include "cohres/constants.hpp"
#include "cohres/errors.hpp"
#include "cohres/resonance.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cohres::io {

using nlohmann::json;

namespace {

constexpr const char* table_format = "cohres.amplitudes";

class Reader {
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw Error(ErrorKind::Malformed, fmt::format("{}: field {}: {}", source_, path, msg));
  }

  const json& field(const json& obj, const char* key, const std::string& path) const {
    if (!obj.is_object())
      fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
      fail(path + "/" + key, "missing");
    return *it;
  }

  const json* optional_field(const json& obj, const char* key, const std::string& path) const {
    if (!obj.is_object())
      fail(path, "expected an object");
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number())
      fail(path, "expected a number");
    return j.get<double>();
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer())
      fail(path, "expected an integer");
    return j.get<int>();
  }

  std::string text(const json& j, const std::string& path) const {
    if (!j.is_string())
      fail(path, "expected a string");
    return j.get<std::string>();
  }

  const json& array(const json& j, const std::string& path) const {
    if (!j.is_array())
      fail(path, "expected an array");
    return j;
  }

  complex cnum(const json& j, const std::string& path) const {
    if (!j.is_array() || j.size() != 2)
      fail(path, "expected [re, im]");
    return {number(j[0], path + "/0"), number(j[1], path + "/1")};
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    array(j, path);
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(number(j[i], fmt::format("{}/{}", path, i)));
    return out;
  }

  ChannelState state(const json& j, const std::string& path,
                     const std::string* arrangement = nullptr) const {
    ChannelState s;
    s.arrangement = arrangement ? *arrangement : text(field(j, "arrangement", path), path + "/arrangement");
    s.v = integer(field(j, "v", path), path + "/v");
    s.j = integer(field(j, "j", path), path + "/j");
    s.m = integer(field(j, "m", path), path + "/m");
    return s;
  }

  json parse(const std::string& text) const {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < byte; ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw Error(ErrorKind::Malformed,
                  fmt::format("{}:{}:{}: malformed JSON: {}", source_, line, col, e.what()));
    }
  }

private:
  std::string source_;
};

json state_json(const ChannelState& s) {
  return json{{"arrangement", s.arrangement}, {"v", s.v}, {"j", s.j}, {"m", s.m}};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw Error(ErrorKind::Io, fmt::format("read error on '{}'", path.string()));
  return ss.str();
}

void check_table(const AmplitudeTable& t, const std::string& source) {
  const auto v = validate_table(t);
  if (v.empty())
    return;
  std::string msg = fmt::format("{}: table violates {} invariant(s):", source, v.size());
  for (const auto& x : v)
    msg += fmt::format(" [{} at {}: {}]", x.invariant, x.location, x.detail);
  throw Error(ErrorKind::Validation, msg);
}

} // namespace

std::string format_number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string table_to_string(const AmplitudeTable& t) {
  check_table(t, "table");
  json j;
  j["format"] = table_format;
  j["version"] = 1;
  j["energy_eV"] = t.energy;
  j["initial"] = json::array({state_json(t.initial[0]), state_json(t.initial[1])});
  j["angle_grid"] = json{{"nodes_rad", t.grid.nodes}, {"weights_sr", t.grid.weights}};
  json channels = json::array();
  for (const auto& ch : t.channels) {
    json states = json::array();
    for (const auto& s : ch.states)
      states.push_back(state_json(s));
    json amps = json::array();
    for (std::size_t a = 0; a + 1 < ch.amplitudes.size(); a += 2) {
      const auto f1 = ch.amplitudes[a];
      const auto f2 = ch.amplitudes[a + 1];
      amps.push_back(json::array({f1.real(), f1.imag(), f2.real(), f2.imag()}));
    }
    channels.push_back(json{{"arrangement", ch.arrangement}, {"states", states}, {"amplitudes", amps}});
  }
  j["channels"] = channels;
  return j.dump(1) + "\n";
}

AmplitudeTable table_from_string(const std::string& text, const std::string& source) {
  const Reader r(source);
  const json doc = r.parse(text);
  if (!doc.is_object())
    r.fail("/", "expected a JSON object");
  if (const auto* fmt_field = r.optional_field(doc, "format", ""))
    if (r.text(*fmt_field, "/format") != table_format)
      r.fail("/format", fmt::format("expected \"{}\"", table_format));

  AmplitudeTable t;
  t.energy = r.number(r.field(doc, "energy_eV", ""), "/energy_eV");

  const auto& init = r.array(r.field(doc, "initial", ""), "/initial");
  if (init.size() != 2)
    r.fail("/initial", "expected exactly two initial states");
  t.initial[0] = r.state(init[0], "/initial/0");
  t.initial[1] = r.state(init[1], "/initial/1");

  const auto& grid = r.field(doc, "angle_grid", "");
  t.grid.nodes = r.numbers(r.field(grid, "nodes_rad", "/angle_grid"), "/angle_grid/nodes_rad");
  t.grid.weights = r.numbers(r.field(grid, "weights_sr", "/angle_grid"), "/angle_grid/weights_sr");
  const std::size_t n_nodes = t.grid.nodes.size();

  const auto& channels = r.array(r.field(doc, "channels", ""), "/channels");
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto cpath = fmt::format("/channels/{}", c);
    ProductChannel pc;
    pc.arrangement = r.text(r.field(channels[c], "arrangement", cpath), cpath + "/arrangement");
    const auto& states = r.array(r.field(channels[c], "states", cpath), cpath + "/states");
    for (std::size_t n = 0; n < states.size(); ++n)
      pc.states.push_back(r.state(states[n], fmt::format("{}/states/{}", cpath, n)));
    const auto& amps = r.array(r.field(channels[c], "amplitudes", cpath), cpath + "/amplitudes");
    if (amps.size() != pc.states.size() * n_nodes)
      r.fail(cpath + "/amplitudes",
             fmt::format("{} rows, expected {} states x {} nodes", amps.size(), pc.states.size(),
                         n_nodes));
    pc.amplitudes.reserve(amps.size() * 2);
    for (std::size_t a = 0; a < amps.size(); ++a) {
      const auto apath = fmt::format("{}/amplitudes/{}", cpath, a);
      if (!amps[a].is_array() || amps[a].size() != 4)
        r.fail(apath, "expected [re1, im1, re2, im2]");
      pc.amplitudes.emplace_back(r.number(amps[a][0], apath + "/0"), r.number(amps[a][1], apath + "/1"));
      pc.amplitudes.emplace_back(r.number(amps[a][2], apath + "/2"), r.number(amps[a][3], apath + "/3"));
    }
    t.channels.push_back(std::move(pc));
  }

  check_table(t, source);
  return t;
}

void write_table(const AmplitudeTable& t, const std::filesystem::path& path) {
  const std::string text = table_to_string(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.close();
  if (!out)
    throw Error(ErrorKind::Io, fmt::format("write error on '{}'", path.string()));
}

AmplitudeTable read_table(const std::filesystem::path& path) {
  return table_from_string(slurp(path), path.string());
}

Scenario scenario_from_string(const std::string& text, const std::string& source) {
  const Reader r(source);
  const json doc = r.parse(text);
  if (!doc.is_object())
    r.fail("/", "expected a JSON object");

  Scenario s;
  if (const auto* f = r.optional_field(doc, "name", ""))
    s.name = r.text(*f, "/name");
  if (const auto* f = r.optional_field(doc, "energy_offset_eV", ""))
    s.energy_offset = r.number(*f, "/energy_offset_eV");
  s.mix = r.number(r.field(doc, "mix", ""), "/mix");
  if (const auto* f = r.optional_field(doc, "grid_order", ""))
    s.grid_order = r.integer(*f, "/grid_order");

  const auto& init = r.array(r.field(doc, "initial_pair", ""), "/initial_pair");
  if (init.size() != 2)
    r.fail("/initial_pair", "expected exactly two initial states");
  s.initial[0] = r.state(init[0], "/initial_pair/0");
  s.initial[1] = r.state(init[1], "/initial_pair/1");

  if (const auto* f = r.optional_field(doc, "masses_amu", "")) {
    if (!f->is_object())
      r.fail("/masses_amu", "expected an object of label: mass");
    for (const auto& [label, value] : f->items())
      s.masses[label] = r.number(value, "/masses_amu/" + label);
  }

  // resonance
  const auto& res = r.field(doc, "resonance", "");
  s.resonance.epsilon_r = r.number(r.field(res, "epsilon_r_eV", "/resonance"), "/resonance/epsilon_r_eV");
  const auto* width = r.optional_field(res, "width_eV", "/resonance");
  const auto* lifetime = r.optional_field(res, "lifetime_fs", "/resonance");
  if ((width == nullptr) == (lifetime == nullptr))
    r.fail("/resonance", "give exactly one of width_eV or lifetime_fs");
  if (width) {
    s.resonance.gamma_width = r.number(*width, "/resonance/width_eV");
  } else {
    const double tau = r.number(*lifetime, "/resonance/lifetime_fs");
    if (!(tau > 0.0))
      r.fail("/resonance/lifetime_fs", "must be positive");
    s.resonance.gamma_width = width_lifetime(tau, WidthLifetime::LifetimeToWidth);
  }
  const auto& ent = r.array(r.field(res, "entrance", "/resonance"), "/resonance/entrance");
  if (ent.size() != 2)
    r.fail("/resonance/entrance", "expected two complex couplings");
  s.resonance.entrance = {r.cnum(ent[0], "/resonance/entrance/0"), r.cnum(ent[1], "/resonance/entrance/1")};
  const auto& exits = r.array(r.field(res, "exits", "/resonance"), "/resonance/exits");
  for (std::size_t c = 0; c < exits.size(); ++c) {
    const auto cpath = fmt::format("/resonance/exits/{}", c);
    ResonanceExits ex;
    ex.arrangement = r.text(r.field(exits[c], "arrangement", cpath), cpath + "/arrangement");
    const auto& states = r.array(r.field(exits[c], "states", cpath), cpath + "/states");
    for (std::size_t n = 0; n < states.size(); ++n) {
      const auto spath = fmt::format("{}/states/{}", cpath, n);
      ExitCoupling e;
      e.state = r.state(states[n], spath, &ex.arrangement);
      e.coupling = r.cnum(r.field(states[n], "coupling", spath), spath + "/coupling");
      e.shape = r.numbers(r.field(states[n], "shape", spath), spath + "/shape");
      ex.states.push_back(std::move(e));
    }
    s.resonance.exits.push_back(std::move(ex));
  }

  // background
  const auto& bg = r.field(doc, "background", "");
  s.background.reference_energy =
      r.number(r.field(bg, "reference_energy_eV", "/background"), "/background/reference_energy_eV");
  if (const auto* f = r.optional_field(bg, "column_weights", "/background")) {
    if (!f->is_array() || f->size() != 2)
      r.fail("/background/column_weights", "expected two complex weights");
    s.background.column_weights = {r.cnum((*f)[0], "/background/column_weights/0"),
                                   r.cnum((*f)[1], "/background/column_weights/1")};
  }
  const auto& chans = r.array(r.field(bg, "channels", "/background"), "/background/channels");
  for (std::size_t c = 0; c < chans.size(); ++c) {
    const auto cpath = fmt::format("/background/channels/{}", c);
    BackgroundChannel bc;
    bc.arrangement = r.text(r.field(chans[c], "arrangement", cpath), cpath + "/arrangement");
    const auto& states = r.array(r.field(chans[c], "states", cpath), cpath + "/states");
    for (std::size_t n = 0; n < states.size(); ++n) {
      const auto spath = fmt::format("{}/states/{}", cpath, n);
      BackgroundTerm term;
      term.state = r.state(states[n], spath, &bc.arrangement);
      term.amplitude = r.cnum(r.field(states[n], "amplitude", spath), spath + "/amplitude");
      if (const auto* f = r.optional_field(states[n], "slope", spath))
        term.slope = r.cnum(*f, spath + "/slope");
      term.shape = r.numbers(r.field(states[n], "shape", spath), spath + "/shape");
      if (const auto* f = r.optional_field(states[n], "column_weights", spath)) {
        if (!f->is_array() || f->size() != 2)
          r.fail(spath + "/column_weights", "expected two complex weights");
        term.column_weights = std::array<complex, 2>{r.cnum((*f)[0], spath + "/column_weights/0"),
                                                     r.cnum((*f)[1], spath + "/column_weights/1")};
      }
      bc.states.push_back(std::move(term));
    }
    s.background.channels.push_back(std::move(bc));
  }

  if (const auto v = validate_scenario(s); !v.empty()) {
    std::string msg = fmt::format("{}: scenario violates {} invariant(s):", source, v.size());
    for (const auto& x : v)
      msg += fmt::format(" [{} at {}: {}]", x.invariant, x.location, x.detail);
    throw Error(ErrorKind::Validation, msg);
  }
  return s;
}

Scenario read_scenario(const std::filesystem::path& path) {
  return scenario_from_string(slurp(path), path.string());
}

std::string scan_csv_header() {
  std::string h = "energy_eV";
  for (const char* prefix : {"A_", "B_"})
    for (const char* col : {"sigma_min", "sigma_max", "sigma_11", "sigma_22", "schwartz"})
      h += fmt::format(",{}{}", prefix, col);
  h += ",r_min,s_at_rmin,phi_at_rmin_deg,r_max,s_at_rmax,phi_at_rmax_deg,r_nc_min,r_nc_max,R,R_nc";
  return h;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os) {
  constexpr double deg = 180.0 / constants::pi;
  os << scan_csv_header() << '\n';
  for (const auto& row : rows) {
    std::string line = format_number(row.energy);
    for (const auto* c : {&row.a, &row.b})
      for (double v : {c->sigma_min, c->sigma_max, c->sigma11, c->sigma22, c->schwartz})
        line += "," + format_number(v);
    const auto& r = row.ratio;
    for (double v : {r.min_value, r.params_at_min.s, r.params_at_min.phi12 * deg, r.max_value,
                     r.params_at_max.s, r.params_at_max.phi12 * deg, row.r_nc_min, row.r_nc_max,
                     row.R, row.R_nc})
      line += "," + format_number(v);
    os << line << '\n';
  }
}

} // namespace cohres::io

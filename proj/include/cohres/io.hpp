#pragma once

#include "cohres/core.hpp"
#include "cohres/scan.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cohres::io {

// Amplitude file: one JSON document
//   {
//     "format": "cohres.amplitudes", "version": 1,
//     "energy_eV": E,
//     "initial": [state, state],
//     "angle_grid": {"nodes_rad": [...], "weights_sr": [...]},
//     "channels": [{"arrangement": "...", "states": [state, ...],
//                   "amplitudes": [[re1, im1, re2, im2], ...]}]
//   }
// with state = {"arrangement": "...", "v": int, "j": int, "m": int} and the
// amplitude rows in state-major, angle-minor order. Numbers are written in
// shortest round-trip form, so read(write(t)) is bit-exact.

std::string table_to_string(const AmplitudeTable& t);
AmplitudeTable table_from_string(const std::string& text, const std::string& source = "<string>");

void write_table(const AmplitudeTable& t, const std::filesystem::path& path);
AmplitudeTable read_table(const std::filesystem::path& path);

Scenario scenario_from_string(const std::string& text, const std::string& source = "<string>");
Scenario read_scenario(const std::filesystem::path& path);

/// Scan CSV: header row, then one row per energy. Channel columns are
/// prefixed A_ and B_ for the first and second channel of the pair.
/// Numbers use %.17g; an unbounded ratio maximum is the token "inf".
void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os);
std::string scan_csv_header();

/// "%.17g", with "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double x);

} // namespace cohres::io

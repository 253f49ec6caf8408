#pragma once

// Physical constants (CODATA 2018). Every unit conversion in the library goes
// through this table.
namespace cohres::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double four_pi = 4.0 * pi;

inline constexpr double hbar_eV_s = 6.582119569e-16;
inline constexpr double hbar_eV_fs = 0.6582119569;
inline constexpr double amu_eV = 931.49410242e6;          // eV / c^2
inline constexpr double c_angstrom_per_s = 2.99792458e18;  // Angstrom / s

} // namespace cohres::constants

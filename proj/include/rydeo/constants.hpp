#pragma once

// CODATA 2018 values, SI units throughout.

namespace rydeo::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double c0 = 299792458.0;          // m/s
inline constexpr double eps0 = 8.8541878128e-12;   // F/m
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double k_b = 1.380649e-23;        // J/K
inline constexpr double q_e = 1.602176634e-19;     // C
inline constexpr double a0 = 5.29177210903e-11;    // m
inline constexpr double amu = 1.66053906660e-27;   // kg

inline constexpr double torr_to_pa = 133.322368;

}  // namespace rydeo::constants

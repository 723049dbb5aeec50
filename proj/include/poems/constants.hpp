#pragma once

// CODATA 2018 exact / recommended values, SI units.
namespace poems::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double h = 6.62607015e-34;            // J s
inline constexpr double hbar = h / (2.0 * pi);         // J s
inline constexpr double e = 1.602176634e-19;           // C
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double eps0 = 8.8541878128e-12;       // F/m

}  // namespace poems::constants

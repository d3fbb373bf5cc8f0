#ifndef SPINSIM_CONSTANTS_HPP
#define SPINSIM_CONSTANTS_HPP

// Unit conventions used throughout:
//   * energies are E/h in Hz,
//   * lengths and densities are SI (m, m^-3),
//   * interaction strengths U0, U1 are SI (J m^3),
//   * magnetic fields are Gauss at the API surface.
// Converting an energy between Hz and Joule is always an explicit
// multiplication by PLANCK_H / division by PLANCK_H.

namespace spinsim::constants {

inline constexpr double PLANCK_H = 6.62607015e-34;     // J s (exact, SI 2019)
inline constexpr double HBAR = 1.054571817e-34;        // J s
inline constexpr double ATOMIC_MASS_KG = 1.66053906660e-27;
inline constexpr double BOHR_RADIUS_M = 5.29177210903e-11;

inline constexpr double hz_to_joule(double hz) { return hz * PLANCK_H; }
inline constexpr double joule_to_hz(double j) { return j / PLANCK_H; }

} // namespace spinsim::constants

#endif

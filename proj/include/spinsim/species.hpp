#ifndef SPINSIM_SPECIES_HPP
#define SPINSIM_SPECIES_HPP

#include <map>
#include <optional>
#include <string>

#include "spinsim/constants.hpp"

namespace spinsim {

/// Atomic species with the spin-channel interaction strengths of a
/// hyperfine manifold F=1 or F=2.
///
/// U0 and U1 are the density and spin interaction strengths built from
/// the even-channel s-wave scattering lengths a_F via g_F = 4*pi*hbar^2*a_F/m:
///   F=1:  U0 = (g0 + 2 g2)/3,              U1 = (g2 - g0)/3
///   F=2:  U0 = (7 g0 + 10 g2 + 18 g4)/35,  U1 = (-7 g0 - 5 g2 + 12 g4)/35
struct SpeciesParams {
  std::string name;
  double mass_kg = 0.0;
  int hyperfine_f = 0;                          // 1 or 2
  std::map<int, double> scattering_lengths_m;   // keyed by total spin channel (even)
  double u0 = 0.0;                              // J m^3
  double u1 = 0.0;                              // J m^3
  std::optional<double> qze_hz_per_gauss2;      // signed quadratic Zeeman coefficient

  double u0_hz_m3() const { return u0 / constants::PLANCK_H; }
  double u1_hz_m3() const { return u1 / constants::PLANCK_H; }
};

/// Build species params from scattering lengths keyed by total spin channel.
/// Throws ConfigError on wrong channel set for F, ValidationError on
/// non-positive mass or lengths or non-repulsive U0.
SpeciesParams build_species(const std::string& name, double mass_kg, int hyperfine_f,
                            const std::map<int, double>& scattering_lengths_m,
                            std::optional<double> qze_hz_per_gauss2 = std::nullopt);

bool operator==(const SpeciesParams& a, const SpeciesParams& b);

/// Quadratic Zeeman energy q = qze_coefficient * B^2 in Hz.
/// Throws ConfigError if the species has no coefficient.
double b_to_q(double b_gauss, const SpeciesParams& species);

/// Species preset file: flat key = value text with fields
/// {name, mass_kg, f, a0_m, a2_m, [a4_m for F=2], qze_hz_per_gauss2}.
SpeciesParams load_species_preset(const std::string& path);

/// Quadratic Zeeman configuration: q in Hz, optionally derived from a field.
struct ZeemanConfig {
  double q_hz = 0.0;
  std::optional<double> b_gauss;

  static ZeemanConfig from_q(double q_hz) { return {q_hz, std::nullopt}; }
  static ZeemanConfig from_b(double b_gauss, const SpeciesParams& species) {
    return {b_to_q(b_gauss, species), b_gauss};
  }
};

} // namespace spinsim

#endif

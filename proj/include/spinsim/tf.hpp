#ifndef SPINSIM_TF_HPP
#define SPINSIM_TF_HPP

#include <array>

#include "spinsim/grid.hpp"
#include "spinsim/species.hpp"
#include "spinsim/trap.hpp"

namespace spinsim {

/// Stationary condensate in the Thomas-Fermi approximation:
/// n0(r) = max(0, (mu - V(r)) / U0), mu fixed by the atom number.
struct CondensateState {
  double mu_hz = 0.0;           // chemical potential, E/h
  double atom_number = 0.0;     // discrete integral of n0 (matches target to 1e-6 rel)
  double peak_density_m3 = 0.0; // max over grid
  Field n0;                     // density, m^-3
};

/// Scalar fields entering the quadratic pair-creation problem.
/// v_eff = V + (U0 + U1) n0 - mu   (single-particle potential, E/h)
/// omega_eff = U1 n0               (pair coupling strength, E/h)
struct EffectiveFields {
  Field v_eff_hz;
  Field omega_eff_hz;
  double mu_hz = 0.0;
  double peak_density_m3 = 0.0;
};

/// Fixes mu by bisection so the discrete integral of n0 over the grid equals
/// atom_number to 1e-10 relative, then fills the density field. Throws
/// DomainError if the cloud touches the grid boundary (harmonic traps).
CondensateState solve_tf(const GridSpec& grid, const TrapGeometry& trap,
                         const SpeciesParams& species, double atom_number);

EffectiveFields effective_fields(const CondensateState& state,
                                 const TrapGeometry& trap,
                                 const SpeciesParams& species);

/// Thomas-Fermi radius per axis for a harmonic trap, R_a = sqrt(2 mu / m) / omega_a.
std::array<double, 3> tf_radii_m(double mu_hz, const TrapGeometry& trap, double mass_kg);

/// Closed-form continuum chemical potential (Hz). Harmonic, any dim d:
/// mu^{(d+2)/2} = N U0 (d+2) (prod omega) (m/2)^{d/2} / (2 V_d) with V_d the
/// unit-ball volume. Box: mu = N U0 / volume. Used to bracket the discrete
/// bisection and to size grids; the grid solve always re-fixes mu on its own
/// quadrature so mass conservation holds on the grid actually used.
double mu_tf_estimate(const TrapGeometry& trap, const SpeciesParams& species,
                      double atom_number);

/// Healing length at the peak density, xi = hbar / sqrt(2 m U0 n_pk).
double healing_length_m(const SpeciesParams& species, double peak_density_m3);

/// Grid covering the Thomas-Fermi cloud with the given margin factor
/// (extent = margin * R_a per active axis). Closed-form mu estimate is used
/// only to size the box; the definitive mu always comes from solve_tf.
GridSpec make_harmonic_grid(const TrapGeometry& trap, const SpeciesParams& species,
                            double atom_number, std::array<int, 3> npts,
                            double margin);

} // namespace spinsim

#endif

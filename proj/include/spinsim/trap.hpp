#ifndef SPINSIM_TRAP_HPP
#define SPINSIM_TRAP_HPP

#include <array>
#include <cmath>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

/// Harmonic or hard-wall box confinement in 1, 2 or 3 dimensions.
///
/// For box traps the walls sit at +/- half_width per active axis and the
/// potential is zero inside; the wall itself is realized by the Dirichlet
/// boundary of the grid, so potential_hz is only ever evaluated inside.
struct TrapGeometry {
  enum class Kind { harmonic, box };

  Kind kind = Kind::harmonic;
  int dim = 3;
  std::array<double, 3> omega_rad = {0, 0, 0};   // rad/s, harmonic only
  std::array<double, 3> half_width_m = {0, 0, 0}; // m, box only

  static TrapGeometry harmonic(int dim, std::array<double, 3> freqs_hz) {
    TrapGeometry t;
    t.kind = Kind::harmonic;
    t.dim = check_dim(dim);
    for (int a = 0; a < dim; ++a) {
      if (!(freqs_hz[a] > 0.0))
        throw ValidationError("trap frequencies must be strictly positive");
      t.omega_rad[a] = 2.0 * std::numbers::pi * freqs_hz[a];
    }
    return t;
  }

  static TrapGeometry box(int dim, std::array<double, 3> half_width_m) {
    TrapGeometry t;
    t.kind = Kind::box;
    t.dim = check_dim(dim);
    for (int a = 0; a < dim; ++a) {
      if (!(half_width_m[a] > 0.0))
        throw ValidationError("box half-widths must be strictly positive");
      t.half_width_m[a] = half_width_m[a];
    }
    return t;
  }

  /// V(r)/h in Hz at a point (inactive coordinates ignored).
  double potential_hz(std::array<double, 3> r_m, double mass_kg) const {
    if (kind == Kind::box) return 0.0;
    double v = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double w = omega_rad[a];
      v += 0.5 * mass_kg * w * w * r_m[a] * r_m[a];
    }
    return constants::joule_to_hz(v);
  }

  /// Geometric-mean trap frequency in rad/s (harmonic only).
  double omega_bar() const {
    double p = 1.0;
    for (int a = 0; a < dim; ++a) p *= omega_rad[a];
    return std::pow(p, 1.0 / dim);
  }

private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > 3) throw ValidationError("dimensionality must be 1, 2 or 3");
    return dim;
  }
};

} // namespace spinsim

#endif

#ifndef SPINSIM_GRID_HPP
#define SPINSIM_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "spinsim/errors.hpp"

namespace spinsim {

/// Uniform Cartesian grid. Point (ix,iy,iz) sits at origin + i*spacing per
/// axis and carries integration weight cell_volume() (midpoint rule).
/// Inactive axes have one point, spacing 1 and do not enter the volume:
/// in 1D/2D the model is a slab of unit transverse cross-section, so
/// densities keep units of m^-3 and U*n stays an energy.
///
/// The implied Dirichlet boundary of the finite-difference operators lies
/// one spacing outside the first/last point of each active axis.
struct GridSpec {
  int dim = 3;
  std::array<int, 3> npts = {1, 1, 1};
  std::array<double, 3> spacing_m = {1.0, 1.0, 1.0};
  std::array<double, 3> origin_m = {0.0, 0.0, 0.0};

  std::size_t size() const {
    return static_cast<std::size_t>(npts[0]) * npts[1] * npts[2];
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing_m[a];
    return v;
  }

  double coord(int axis, int i) const { return origin_m[axis] + i * spacing_m[axis]; }

  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(npts[0]) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(npts[1]) * iz);
  }

  std::array<double, 3> point(std::size_t flat) const {
    const int ix = static_cast<int>(flat % npts[0]);
    const int iy = static_cast<int>((flat / npts[0]) % npts[1]);
    const int iz = static_cast<int>(flat / (static_cast<std::size_t>(npts[0]) * npts[1]));
    return {coord(0, ix), coord(1, iy), coord(2, iz)};
  }

  bool same_as(const GridSpec& o) const;

  /// Symmetric grid spanning [-half_extent, +half_extent] per active axis,
  /// endpoints included.
  static GridSpec centered(int dim, std::array<int, 3> npts,
                           std::array<double, 3> half_extent_m);

  /// Grid for a hard-wall box: points inset one spacing from the walls so
  /// the implied Dirichlet zeros coincide with the walls at +/- half_width.
  static GridSpec box_interior(int dim, std::array<int, 3> npts,
                               std::array<double, 3> half_width_m);
};

/// Scalar field sampled on a grid.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

} // namespace spinsim

#endif

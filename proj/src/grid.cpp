#include "spinsim/grid.hpp"

namespace spinsim {

namespace {

void check(int dim, const std::array<int, 3>& npts) {
  if (dim < 1 || dim > 3) throw ValidationError("grid dimensionality must be 1, 2 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a < dim && npts[a] < 2)
      throw ValidationError("grid needs at least 2 points per active axis");
    if (a >= dim && npts[a] != 1)
      throw ValidationError("inactive grid axes must have exactly 1 point");
  }
}

} // namespace

bool GridSpec::same_as(const GridSpec& o) const {
  return dim == o.dim && npts == o.npts && spacing_m == o.spacing_m &&
         origin_m == o.origin_m;
}

GridSpec GridSpec::centered(int dim, std::array<int, 3> npts,
                            std::array<double, 3> half_extent_m) {
  check(dim, npts);
  GridSpec g;
  g.dim = dim;
  g.npts = npts;
  for (int a = 0; a < dim; ++a) {
    if (!(half_extent_m[a] > 0.0))
      throw ValidationError("grid half-extent must be strictly positive");
    g.spacing_m[a] = 2.0 * half_extent_m[a] / (npts[a] - 1);
    g.origin_m[a] = -half_extent_m[a];
  }
  return g;
}

GridSpec GridSpec::box_interior(int dim, std::array<int, 3> npts,
                                std::array<double, 3> half_width_m) {
  check(dim, npts);
  GridSpec g;
  g.dim = dim;
  g.npts = npts;
  for (int a = 0; a < dim; ++a) {
    if (!(half_width_m[a] > 0.0))
      throw ValidationError("box half-width must be strictly positive");
    // Implied Dirichlet zeros one spacing outside the points = at the walls.
    g.spacing_m[a] = 2.0 * half_width_m[a] / (npts[a] + 1);
    g.origin_m[a] = -half_width_m[a] + g.spacing_m[a];
  }
  return g;
}

} // namespace spinsim

#include "spinsim/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

Eigen::MatrixXd StencilHam::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const std::size_t nx = grid.npts[0], ny = grid.npts[1], nz = grid.npts[2];
  for (std::size_t i = 0; i < size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = diag_hz[i];
    const std::size_t ix = i % nx, iy = (i / nx) % ny, iz = i / (nx * ny);
    if (ix > 0) h(ii, ii - 1) = -shape.hop_hz[0];
    if (ix + 1 < nx) h(ii, ii + 1) = -shape.hop_hz[0];
    if (iy > 0) h(ii, ii - static_cast<Eigen::Index>(nx)) = -shape.hop_hz[1];
    if (iy + 1 < ny) h(ii, ii + static_cast<Eigen::Index>(nx)) = -shape.hop_hz[1];
    if (iz > 0) h(ii, ii - static_cast<Eigen::Index>(nx * ny)) = -shape.hop_hz[2];
    if (iz + 1 < nz) h(ii, ii + static_cast<Eigen::Index>(nx * ny)) = -shape.hop_hz[2];
  }
  return h;
}

StencilHam make_stencil(const GridSpec& grid, double mass_kg,
                        std::vector<double> diag_extra_hz) {
  if (diag_extra_hz.size() != grid.size())
    throw ValidationError("stencil diagonal length does not match the grid");
  StencilHam ham;
  ham.grid = grid;
  ham.shape.npts = grid.npts;
  ham.shape.dim = grid.dim;
  double hop_sum = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const double d = grid.spacing_m[a];
    ham.shape.hop_hz[a] =
        constants::HBAR / (4.0 * std::numbers::pi * mass_kg * d * d);
    hop_sum += ham.shape.hop_hz[a];
  }
  ham.diag_hz = std::move(diag_extra_hz);
  for (double& v : ham.diag_hz) v += 2.0 * hop_sum;
  return ham;
}

StencilHam discretize_heff(const EffectiveFields& fields, const SpeciesParams& species,
                           double resolution_relax) {
  if (!(resolution_relax > 0.0))
    throw ValidationError("resolution_relax must be positive");
  const GridSpec& grid = fields.v_eff_hz.grid;
  const double xi = healing_length_m(species, fields.peak_density_m3);
  for (int a = 0; a < grid.dim; ++a) {
    const double bound = resolution_relax * xi / 2.0;
    if (grid.spacing_m[a] > bound)
      throw ResolutionError(
          "grid spacing on axis " + std::to_string(a) + " (" +
          std::to_string(grid.spacing_m[a] * 1e6) + " um) exceeds " +
          std::to_string(bound * 1e6) +
          " um (healing length / 2 times the configured relax factor)");
  }
  return make_stencil(grid, species.mass_kg, fields.v_eff_hz.values);
}

} // namespace spinsim

#ifndef SPINSIM_HAMILTONIAN_HPP
#define SPINSIM_HAMILTONIAN_HPP

#include <Eigen/Dense>

#include "spinsim/grid.hpp"
#include "spinsim/kernels.hpp"
#include "spinsim/species.hpp"
#include "spinsim/tf.hpp"

namespace spinsim {

/// Sparse application of H_eff = -hbar^2 Laplacian / 2m + v_eff as a
/// 7-point stencil, all entries in Hz. Hopping per axis is
/// t_a = hbar / (4 pi m d_a^2); the diagonal carries v_eff + 2 sum_a t_a.
/// Dirichlet boundary: neighbors outside the grid contribute nothing,
/// which places the implied zeros one spacing outside the points.
struct StencilHam {
  GridSpec grid;
  StencilShape shape;
  std::vector<double> diag_hz;

  std::size_t size() const { return grid.size(); }
  void apply(const double* x, double* y) const {
    kernels::stencil_apply(shape, diag_hz.data(), x, y);
  }

  /// Dense matrix for small grids (tests only).
  Eigen::MatrixXd to_dense() const;
};

/// Builds the stencil operator for the given effective potential. Enforces
/// the resolution precondition spacing <= resolution_relax * xi / 2 per
/// active axis (xi the healing length at peak density) and throws
/// ResolutionError when violated.
StencilHam discretize_heff(const EffectiveFields& fields, const SpeciesParams& species,
                           double resolution_relax = 1.0);

/// Stencil operator with an arbitrary diagonal (oracle/test construction).
StencilHam make_stencil(const GridSpec& grid, double mass_kg,
                        std::vector<double> diag_extra_hz);

} // namespace spinsim

#endif

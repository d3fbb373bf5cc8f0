#ifndef SPINSIM_LANCZOS_HPP
#define SPINSIM_LANCZOS_HPP

#include <cstdint>
#include <vector>

#include "spinsim/grid.hpp"
#include "spinsim/hamiltonian.hpp"

namespace spinsim {

/// Lowest eigenpairs of a stencil Hamiltonian. Modes are stored row-major
/// (mode index first) and normalized so sum_r phi^2 * cell_volume = 1.
/// Invariant on exit: either count == m_cap, or the first energy above the
/// last kept mode exceeds cutoff_hz (the basis provably covers the window).
struct ModeBasis {
  GridSpec grid;
  std::vector<double> energies_hz; // ascending
  std::vector<double> modes;       // count x grid.size(), row-major
  int count = 0;
  double cutoff_hz = 0.0;
  bool cutoff_covered = false; // true when energies beyond the window were seen

  const double* mode(int j) const { return modes.data() + static_cast<std::size_t>(j) * grid.size(); }
};

struct LanczosOptions {
  int m_cap = 400;            // hard cap on returned modes
  double cutoff_hz = 0.0;     // keep modes with energy <= cutoff (plus one beyond)
  double tol = 1e-8;          // residual tolerance, relative to max(1, |eps|)
  int max_basis = 0;          // Krylov vectors held at once; 0 = choose automatically
  int max_restarts = 60;
  std::uint64_t seed = 0x5350494e53494dULL;
  double degeneracy_tol = 1e-6; // Hz; cluster width for canonicalization
  // Confirm multiplicities with a restarted probe against the deflated
  // operator before returning. Costs extra iterations per degenerate copy;
  // safe to disable when the observable is insensitive to multiplicity.
  bool verify_completeness = true;
};

/// Thick-restart Lanczos with full reorthogonalization. Deterministic for a
/// fixed seed: same eigenpairs bit-for-bit regardless of thread count.
/// Degenerate clusters are canonicalized by sequentially diagonalizing
/// coordinate moments so the returned vectors do not depend on iteration
/// noise. Throws SolverError if convergence fails within max_restarts.
ModeBasis solve_lowest_modes(const StencilHam& ham, const LanczosOptions& opts);

} // namespace spinsim

#endif

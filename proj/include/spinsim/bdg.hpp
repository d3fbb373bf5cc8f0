#ifndef SPINSIM_BDG_HPP
#define SPINSIM_BDG_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinsim/lanczos.hpp"
#include "spinsim/tf.hpp"

namespace spinsim {

/// Instability spectrum of the quadratic pair-creation problem projected on
/// a mode basis. With D = diag(eps_n + q) and the symmetric coupling
/// A_{nn'} = integral Omega_eff phi_n phi_n', the Bogoliubov eigenvalues xi
/// solve the 2M x 2M block problem [[D, A], [-A, -D]]. Squares of xi are the
/// eigenvalues of the M x M product (D - A)(D + A); both routes are kept and
/// cross-checked, the product form being the default (quarter the memory,
/// about an eighth of the flops).
struct BdgSpectrum {
  double q_hz = 0.0;
  std::vector<std::complex<double>> xi_hz; // full 2M multiset
  double lambda_hz = 0.0;                  // max |Im xi|
  int unstable_count = 0;                  // # xi with Im xi > 1e-6 Hz
  // Upper-block coefficients of the eigenvector with max |Im xi|. Filled by
  // the full 2M x 2M route only; the product route leaves it empty.
  std::vector<std::complex<double>> top_coeffs;
};

/// Threshold below which an eigenvalue counts as real (Hz).
inline constexpr double kImagTol = 1e-6;

/// A_{nn'} = sum_r Omega_eff(r) phi_n(r) phi_n'(r) * cell_volume, in Hz.
/// Symmetric by construction (lower triangle computed once and mirrored).
/// Throws ValidationError when basis and fields live on different grids.
Eigen::MatrixXd coupling_matrix(const ModeBasis& basis, const EffectiveFields& fields);
Eigen::MatrixXd coupling_matrix(const ModeBasis& basis, const Field& omega_eff_hz);

/// Full 2M x 2M route; fills top_coeffs. Eigenvalues are sorted by
/// (Im, Re) descending so output is reproducible.
BdgSpectrum bdg_eigen(const Eigen::VectorXd& eps_hz, const Eigen::MatrixXd& a_hz,
                      double q_hz);

/// Product route: eigenvalues of (D - A)(D + A) are xi^2; each contributes
/// the pair {+sqrt, -sqrt} (principal branch). Conjugate eigenvalue pairs of
/// the real product matrix close the multiset under conjugation, so the
/// result matches the full route.
BdgSpectrum bdg_eigen_product(const Eigen::VectorXd& eps_hz, const Eigen::MatrixXd& a_hz,
                              double q_hz);

BdgSpectrum bdg_eigen(const ModeBasis& basis, const Eigen::MatrixXd& a_hz, double q_hz);
BdgSpectrum bdg_eigen_product(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                              double q_hz);

/// Lambda(q) = max |Im xi| via the product route.
double instability_rate(const ModeBasis& basis, const Eigen::MatrixXd& a_hz, double q_hz);

/// |sum_n c_n phi_n(r)|^2 of the fastest-growing eigenvector from its
/// upper-block coefficients, normalized to unit discrete integral.
/// Empty coefficients produce a zero field.
Field most_unstable_density(const ModeBasis& basis,
                            const std::vector<std::complex<double>>& coeffs);

} // namespace spinsim

#endif

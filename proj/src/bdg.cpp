#include "spinsim/bdg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "spinsim/errors.hpp"
#include "spinsim/kernels.hpp"

namespace spinsim {

namespace {

void check_square(const Eigen::VectorXd& eps_hz, const Eigen::MatrixXd& a_hz) {
  if (eps_hz.size() == 0)
    throw ValidationError("pair-creation spectrum needs at least one mode");
  if (a_hz.rows() != eps_hz.size() || a_hz.cols() != eps_hz.size())
    throw ValidationError("coupling matrix shape does not match the mode count");
}

// Deterministic order: Im descending, then Re descending. The multiset is
// closed under negation and conjugation, so the head has Im = max |Im|.
void sort_spectrum(std::vector<std::complex<double>>& xi) {
  std::stable_sort(xi.begin(), xi.end(), [](const std::complex<double>& a,
                                            const std::complex<double>& b) {
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() > b.real();
  });
}

void finish(BdgSpectrum& s) {
  sort_spectrum(s.xi_hz);
  s.lambda_hz = 0.0;
  s.unstable_count = 0;
  for (const auto& xi : s.xi_hz) {
    s.lambda_hz = std::max(s.lambda_hz, std::abs(xi.imag()));
    if (xi.imag() > kImagTol) ++s.unstable_count;
  }
}

// eig((D-A)(D+A)) = eig(L^T (D-A) L) when D+A = L L^T (and symmetrically for
// D-A positive definite), because eig(XY) = eig(YX). With either factor
// definite the squared frequencies are real, so a symmetric solve suffices
// and is several times faster than the Schur form. Returns false when both
// factors are indefinite; only then can genuinely complex xi^2 quartets occur.
bool product_spectrum_symmetric(const Eigen::MatrixXd& dma,
                                const Eigen::MatrixXd& dpa,
                                std::vector<std::complex<double>>& xi) {
  Eigen::LLT<Eigen::MatrixXd> llt(dpa);
  const Eigen::MatrixXd* other = &dma;
  if (llt.info() != Eigen::Success) {
    llt.compute(dma);
    other = &dpa;
    if (llt.info() != Eigen::Success) return false;
  }
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd b = l.transpose() * (*other) * l;
  b = (0.5 * (b + b.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXd& sq = es.eigenvalues();
  for (Eigen::Index i = 0; i < sq.size(); ++i) {
    if (sq(i) >= 0.0) {
      const double r = std::sqrt(sq(i));
      xi.emplace_back(r, 0.0);
      xi.emplace_back(-r, 0.0);
    } else {
      const double g = std::sqrt(-sq(i));
      xi.emplace_back(0.0, g);
      xi.emplace_back(0.0, -g);
    }
  }
  return true;
}

} // namespace

Eigen::MatrixXd coupling_matrix(const ModeBasis& basis, const Field& omega_eff_hz) {
  if (!basis.grid.same_as(omega_eff_hz.grid))
    throw ValidationError(
        "mode basis and coupling field must live on the same grid");
  if (basis.count <= 0) throw ValidationError("mode basis is empty");
  const std::size_t m = static_cast<std::size_t>(basis.count);
  const std::size_t n = basis.grid.size();
  Eigen::MatrixXd g(m, m);
  kernels::weighted_gram(basis.modes.data(), m, n, omega_eff_hz.values.data(),
                         g.data());
  g *= basis.grid.cell_volume();
  return g;
}

Eigen::MatrixXd coupling_matrix(const ModeBasis& basis, const EffectiveFields& fields) {
  return coupling_matrix(basis, fields.omega_eff_hz);
}

BdgSpectrum bdg_eigen(const Eigen::VectorXd& eps_hz, const Eigen::MatrixXd& a_hz,
                      double q_hz) {
  check_square(eps_hz, a_hz);
  const Eigen::Index m = eps_hz.size();

  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  big.topLeftCorner(m, m).diagonal() = eps_hz.array() + q_hz;
  big.topRightCorner(m, m) = a_hz;
  big.bottomLeftCorner(m, m) = -a_hz;
  big.bottomRightCorner(m, m).diagonal() = -(eps_hz.array() + q_hz);

  Eigen::EigenSolver<Eigen::MatrixXd> es(big);
  if (es.info() != Eigen::Success)
    throw SolverError("pair-creation eigenproblem (block form) failed to converge");

  BdgSpectrum out;
  out.q_hz = q_hz;
  const Eigen::VectorXcd ev = es.eigenvalues();
  out.xi_hz.assign(ev.data(), ev.data() + ev.size());
  finish(out);

  // Eigenvector of the top of the sort order: the fastest-growing direction
  // when anything is unstable, otherwise a deterministic stand-in.
  Eigen::Index pick = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    const std::complex<double> a = ev(i), b = ev(pick);
    if (a.imag() > b.imag() || (a.imag() == b.imag() && a.real() > b.real()))
      pick = i;
  }
  const Eigen::VectorXcd vec = es.eigenvectors().col(pick);
  out.top_coeffs.assign(vec.data(), vec.data() + m);
  return out;
}

BdgSpectrum bdg_eigen_product(const Eigen::VectorXd& eps_hz,
                              const Eigen::MatrixXd& a_hz, double q_hz) {
  check_square(eps_hz, a_hz);
  const Eigen::Index m = eps_hz.size();

  Eigen::MatrixXd dpa = a_hz;
  dpa.diagonal().array() += eps_hz.array() + q_hz;
  Eigen::MatrixXd dma = -a_hz;
  dma.diagonal().array() += eps_hz.array() + q_hz;

  BdgSpectrum out;
  out.q_hz = q_hz;
  out.xi_hz.reserve(static_cast<std::size_t>(2 * m));
  if (!product_spectrum_symmetric(dma, dpa, out.xi_hz)) {
    const Eigen::MatrixXd prod = dma * dpa;
    Eigen::EigenSolver<Eigen::MatrixXd> es(prod);
    if (es.info() != Eigen::Success)
      throw SolverError("pair-creation eigenproblem (product form) failed to converge");
    const Eigen::VectorXcd sq = es.eigenvalues();
    for (Eigen::Index i = 0; i < m; ++i) {
      const std::complex<double> xi = std::sqrt(sq(i));
      out.xi_hz.push_back(xi);
      out.xi_hz.push_back(-xi);
    }
  }
  finish(out);
  return out;
}

namespace {

Eigen::VectorXd basis_energies(const ModeBasis& basis) {
  return Eigen::Map<const Eigen::VectorXd>(
      basis.energies_hz.data(), static_cast<Eigen::Index>(basis.energies_hz.size()));
}

} // namespace

BdgSpectrum bdg_eigen(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                      double q_hz) {
  return bdg_eigen(basis_energies(basis), a_hz, q_hz);
}

BdgSpectrum bdg_eigen_product(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                              double q_hz) {
  return bdg_eigen_product(basis_energies(basis), a_hz, q_hz);
}

double instability_rate(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                        double q_hz) {
  return bdg_eigen_product(basis, a_hz, q_hz).lambda_hz;
}

Field most_unstable_density(const ModeBasis& basis,
                            const std::vector<std::complex<double>>& coeffs) {
  Field out;
  out.grid = basis.grid;
  out.values.assign(basis.grid.size(), 0.0);
  if (coeffs.empty()) return out;
  if (coeffs.size() != static_cast<std::size_t>(basis.count))
    throw ValidationError("eigenvector coefficient count does not match the basis");

  const std::size_t n = basis.grid.size();
  std::vector<double> re(n, 0.0), im(n, 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double* phi = basis.mode(static_cast<int>(j));
    const double cr = coeffs[j].real();
    const double ci = coeffs[j].imag();
    for (std::size_t i = 0; i < n; ++i) {
      re[i] += cr * phi[i];
      im[i] += ci * phi[i];
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = re[i] * re[i] + im[i] * im[i];
    total += out.values[i];
  }
  total *= basis.grid.cell_volume();
  if (total > 0.0)
    for (double& v : out.values) v /= total;
  return out;
}

} // namespace spinsim

#ifndef SPINSIM_KERNELS_HPP
#define SPINSIM_KERNELS_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace spinsim {

/// Stencil geometry shared by the serial and OpenMP kernel variants:
/// second-order central Laplacian on npts with Dirichlet boundaries one
/// spacing outside the grid (outside neighbors simply dropped).
struct StencilShape {
  std::array<int, 3> npts = {1, 1, 1};
  std::array<double, 3> hop_hz = {0.0, 0.0, 0.0}; // off-diagonal coefficient per axis
  int dim = 3;
};

/// Reductions run over fixed 4096-element chunks whose partial sums are
/// combined in ascending chunk order. Serial and OpenMP variants therefore
/// produce bitwise-identical results for any thread count: the parallel
/// schedule only decides who computes a chunk, never the summation order.
inline constexpr std::size_t kChunk = 4096;

namespace kernels_serial {

double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);

/// y = (diag + stencil) x.
void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y);

/// out[j] = <basis_j, x> for j in [0, m); basis row-major m x n.
void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out);

/// x -= sum_j coef[j] * basis_j.
void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x);

/// G[i*m + j] = sum_k rows_i[k] * w[k] * rows_j[k], for i,j in [0, m).
/// Only needs the full product when m is small (coupling matrices).
void weighted_gram(const double* rows, std::size_t m, std::size_t n,
                   const double* w, double* gram);

/// First l rows of rows (k x n) replaced by coef^T * rows, coef column-major
/// k x l. Used for basis compression at eigensolver restarts.
void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l);

} // namespace kernels_serial

namespace kernels_omp {

double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y);
void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out);
void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x);
void weighted_gram(const double* rows, std::size_t m, std::size_t n,
                   const double* w, double* gram);
void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l);

} // namespace kernels_omp

namespace kernels {

/// Selects the OpenMP variants when true (default when compiled with OpenMP).
void set_parallel(bool on);
bool parallel();

double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y);
void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out);
void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x);
void weighted_gram(const double* rows, std::size_t m, std::size_t n,
                   const double* w, double* gram);
void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l);

} // namespace kernels

} // namespace spinsim

#endif

#ifndef SPINSIM_SRC_KERNELS_DETAIL_HPP
#define SPINSIM_SRC_KERNELS_DETAIL_HPP

// Shared floating-point primitives for the serial and OpenMP kernel
// variants. Each primitive is compiled exactly once (kernels.cpp), so both
// variants execute identical instruction sequences per element and per
// chunk; the variants only decide who runs which chunk. Combined with
// ascending-order combination of chunk partials this makes every kernel
// bitwise reproducible across thread counts.

#include <cstddef>

#include "spinsim/kernels.hpp"

namespace spinsim::kernels_detail {

double chunk_dot(const double* x, const double* y, std::size_t len);
double chunk_wdot(const double* x, const double* y, const double* w, std::size_t len);
double chunk_nrm2sq(const double* x, std::size_t len);
void chunk_axpy(double a, const double* x, double* y, std::size_t len);
void chunk_scale(double a, double* x, std::size_t len);

// Ascending-chunk-order reductions (the reference summation order).
double full_dot(const double* x, const double* y, std::size_t n);
double full_wdot(const double* x, const double* y, const double* w, std::size_t n);
double full_nrm2sq(const double* x, std::size_t n);

void stencil_range(const StencilShape& s, const double* diag, const double* x,
                   double* y, std::size_t i0, std::size_t i1);

// x[c] -= sum_j coef[j] * basis[j][c] for c in [c0, c1), j ascending.
void subtract_range(const double* basis, std::size_t m, std::size_t n,
                    const double* coef, double* x, std::size_t c0, std::size_t c1);

// Column block size for the in-place basis rotation (keeps the l x block
// scratch within L2). Independent of kChunk; does not affect results.
inline constexpr std::size_t kRotateBlock = 512;

// scratch[j * (c1-c0) + (c-c0)] = sum_i coef[i + j*k] * rows[i*n + c],
// i ascending; caller copies scratch back into rows. coef is column-major
// k x l (Eigen default layout).
void rotate_block(const double* rows, std::size_t k, std::size_t n,
                  const double* coef, std::size_t l, double* scratch,
                  std::size_t c0, std::size_t c1);

std::size_t chunk_count(std::size_t n);

} // namespace spinsim::kernels_detail

#endif

#include "spinsim/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>

#include "kernels_detail.hpp"

namespace spinsim::kernels_detail {

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

double chunk_dot(const double* x, const double* y, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * y[i];
  return acc;
}

double chunk_wdot(const double* x, const double* y, const double* w, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double chunk_nrm2sq(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * x[i];
  return acc;
}

void chunk_axpy(double a, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += a * x[i];
}

void chunk_scale(double a, double* x, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) x[i] *= a;
}

double full_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    acc += chunk_dot(x + c0, y + c0, std::min(kChunk, n - c0));
  return acc;
}

double full_wdot(const double* x, const double* y, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    acc += chunk_wdot(x + c0, y + c0, w + c0, std::min(kChunk, n - c0));
  return acc;
}

double full_nrm2sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    acc += chunk_nrm2sq(x + c0, std::min(kChunk, n - c0));
  return acc;
}

void stencil_range(const StencilShape& s, const double* diag, const double* x,
                   double* y, std::size_t i0, std::size_t i1) {
  const std::size_t nx = static_cast<std::size_t>(s.npts[0]);
  const std::size_t ny = static_cast<std::size_t>(s.npts[1]);
  const std::size_t nz = static_cast<std::size_t>(s.npts[2]);
  const double tx = s.hop_hz[0], ty = s.hop_hz[1], tz = s.hop_hz[2];
  const std::size_t plane = nx * ny;

  std::size_t ix = i0 % nx;
  std::size_t iy = (i0 / nx) % ny;
  std::size_t iz = i0 / plane;

  for (std::size_t i = i0; i < i1; ++i) {
    double acc = diag[i] * x[i];
    if (ix > 0) acc -= tx * x[i - 1];
    if (ix + 1 < nx) acc -= tx * x[i + 1];
    if (iy > 0) acc -= ty * x[i - nx];
    if (iy + 1 < ny) acc -= ty * x[i + nx];
    if (iz > 0) acc -= tz * x[i - plane];
    if (iz + 1 < nz) acc -= tz * x[i + plane];
    y[i] = acc;
    if (++ix == nx) {
      ix = 0;
      if (++iy == ny) {
        iy = 0;
        ++iz;
      }
    }
  }
}

void subtract_range(const double* basis, std::size_t m, std::size_t n,
                    const double* coef, double* x, std::size_t c0, std::size_t c1) {
  const std::size_t len = c1 - c0;
  for (std::size_t j = 0; j < m; ++j)
    chunk_axpy(-coef[j], basis + j * n + c0, x + c0, len);
}

void rotate_block(const double* rows, std::size_t k, std::size_t n,
                  const double* coef, std::size_t l, double* scratch,
                  std::size_t c0, std::size_t c1) {
  const std::size_t len = c1 - c0;
  std::memset(scratch, 0, l * len * sizeof(double));
  for (std::size_t i = 0; i < k; ++i) {
    const double* seg = rows + i * n + c0;
    for (std::size_t j = 0; j < l; ++j) {
      const double cij = coef[i + j * k];
      double* out = scratch + j * len;
      for (std::size_t c = 0; c < len; ++c) out[c] += cij * seg[c];
    }
  }
}

} // namespace spinsim::kernels_detail

namespace spinsim::kernels {

namespace {
std::atomic<bool> g_parallel{
#ifdef SPINSIM_HAVE_OPENMP
    true
#else
    false
#endif
};
} // namespace

void set_parallel(bool on) {
#ifndef SPINSIM_HAVE_OPENMP
  on = false;
#endif
  g_parallel.store(on, std::memory_order_relaxed);
}

bool parallel() { return g_parallel.load(std::memory_order_relaxed); }

#define SPINSIM_DISPATCH(fn, ...) \
  (parallel() ? kernels_omp::fn(__VA_ARGS__) : kernels_serial::fn(__VA_ARGS__))

double dot(const double* x, const double* y, std::size_t n) {
  return SPINSIM_DISPATCH(dot, x, y, n);
}
double nrm2sq(const double* x, std::size_t n) { return SPINSIM_DISPATCH(nrm2sq, x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) {
  SPINSIM_DISPATCH(axpy, a, x, y, n);
}
void scale(double a, double* x, std::size_t n) { SPINSIM_DISPATCH(scale, a, x, n); }
void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y) {
  SPINSIM_DISPATCH(stencil_apply, s, diag, x, y);
}
void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out) {
  SPINSIM_DISPATCH(row_dots, basis, m, n, x, out);
}
void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x) {
  SPINSIM_DISPATCH(subtract_combination, basis, m, n, coef, x);
}
void weighted_gram(const double* rows, std::size_t m, std::size_t n, const double* w,
                   double* gram) {
  SPINSIM_DISPATCH(weighted_gram, rows, m, n, w, gram);
}
void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l) {
  SPINSIM_DISPATCH(rotate_inplace, rows, k, n, coef, l);
}

#undef SPINSIM_DISPATCH

} // namespace spinsim::kernels

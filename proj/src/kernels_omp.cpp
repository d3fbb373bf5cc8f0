#include <algorithm>
#include <cstdint>
#include <vector>

#include "kernels_detail.hpp"
#include "spinsim/kernels.hpp"

// Parallel schedules only decide which thread computes a chunk; partials are
// always combined serially in ascending chunk order, and every per-element
// primitive is the single instance from kernels.cpp. Results are therefore
// bitwise identical to the serial variants for any thread count.

namespace spinsim::kernels_omp {

using namespace kernels_detail;

double dot(const double* x, const double* y, std::size_t n) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
  std::vector<double> partial(static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    partial[c] = chunk_dot(x + c0, y + c0, std::min(kChunk, n - c0));
  }
  double acc = 0.0;
  for (std::int64_t c = 0; c < nc; ++c) acc += partial[c];
  return acc;
}

double nrm2sq(const double* x, std::size_t n) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
  std::vector<double> partial(static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    partial[c] = chunk_nrm2sq(x + c0, std::min(kChunk, n - c0));
  }
  double acc = 0.0;
  for (std::int64_t c = 0; c < nc; ++c) acc += partial[c];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    chunk_axpy(a, x + c0, y + c0, std::min(kChunk, n - c0));
  }
}

void scale(double a, double* x, std::size_t n) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    chunk_scale(a, x + c0, std::min(kChunk, n - c0));
  }
}

void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y) {
  const std::size_t n = static_cast<std::size_t>(s.npts[0]) * s.npts[1] * s.npts[2];
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    stencil_range(s, diag, x, y, c0, std::min(c0 + kChunk, n));
  }
}

void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out) {
  const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < mm; ++j) out[j] = full_dot(basis + j * n, x, n);
}

void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    subtract_range(basis, m, n, coef, x, c0, std::min(c0 + kChunk, n));
  }
}

void weighted_gram(const double* rows, std::size_t m, std::size_t n, const double* w,
                   double* gram) {
  const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < mm; ++i)
    for (std::int64_t j = 0; j <= i; ++j)
      gram[i * mm + j] = full_wdot(rows + i * n, rows + j * n, w, n);
  for (std::int64_t i = 0; i < mm; ++i)
    for (std::int64_t j = 0; j < i; ++j) gram[j * mm + i] = gram[i * mm + j];
}

void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l) {
  const std::int64_t nb =
      static_cast<std::int64_t>((n + kRotateBlock - 1) / kRotateBlock);
#pragma omp parallel
  {
    std::vector<double> scratch(l * kRotateBlock);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
      const std::size_t c0 = static_cast<std::size_t>(b) * kRotateBlock;
      const std::size_t c1 = std::min(c0 + kRotateBlock, n);
      rotate_block(rows, k, n, coef, l, scratch.data(), c0, c1);
      const std::size_t len = c1 - c0;
      for (std::size_t j = 0; j < l; ++j)
        std::copy(scratch.begin() + j * len, scratch.begin() + (j + 1) * len,
                  rows + j * n + c0);
    }
  }
}

} // namespace spinsim::kernels_omp

#include <algorithm>
#include <vector>

#include "kernels_detail.hpp"
#include "spinsim/kernels.hpp"

namespace spinsim::kernels_serial {

using namespace kernels_detail;

double dot(const double* x, const double* y, std::size_t n) { return full_dot(x, y, n); }

double nrm2sq(const double* x, std::size_t n) { return full_nrm2sq(x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    chunk_axpy(a, x + c0, y + c0, std::min(kChunk, n - c0));
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    chunk_scale(a, x + c0, std::min(kChunk, n - c0));
}

void stencil_apply(const StencilShape& s, const double* diag, const double* x,
                   double* y) {
  const std::size_t n = static_cast<std::size_t>(s.npts[0]) * s.npts[1] * s.npts[2];
  stencil_range(s, diag, x, y, 0, n);
}

void row_dots(const double* basis, std::size_t m, std::size_t n, const double* x,
              double* out) {
  for (std::size_t j = 0; j < m; ++j) out[j] = full_dot(basis + j * n, x, n);
}

void subtract_combination(const double* basis, std::size_t m, std::size_t n,
                          const double* coef, double* x) {
  for (std::size_t c0 = 0; c0 < n; c0 += kChunk)
    subtract_range(basis, m, n, coef, x, c0, std::min(c0 + kChunk, n));
}

void weighted_gram(const double* rows, std::size_t m, std::size_t n, const double* w,
                   double* gram) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = full_wdot(rows + i * n, rows + j * n, w, n);
      gram[i * m + j] = v;
      gram[j * m + i] = v;
    }
}

void rotate_inplace(double* rows, std::size_t k, std::size_t n, const double* coef,
                    std::size_t l) {
  std::vector<double> scratch(l * kRotateBlock);
  for (std::size_t c0 = 0; c0 < n; c0 += kRotateBlock) {
    const std::size_t c1 = std::min(c0 + kRotateBlock, n);
    rotate_block(rows, k, n, coef, l, scratch.data(), c0, c1);
    const std::size_t len = c1 - c0;
    for (std::size_t j = 0; j < l; ++j)
      std::copy(scratch.begin() + j * len, scratch.begin() + (j + 1) * len,
                rows + j * n + c0);
  }
}

} // namespace spinsim::kernels_serial

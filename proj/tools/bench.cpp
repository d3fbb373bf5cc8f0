// Timing comparison of the serial and OpenMP kernel variants, plus a
// bit-for-bit equality check between the two on every op.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <vector>

#include "spinsim/kernels.hpp"

using spinsim::StencilShape;

namespace {

struct Rng {
  std::uint64_t s = 0x42;
  double next() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (z >> 11) * 0x1.0p-53 - 0.5;
  }
  void fill(std::vector<double>& v) {
    for (double& x : v) x = next();
  }
};

template <class F>
double time_best(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* op, double ts, double tp, bool identical) {
  std::printf("%-22s %10.4f ms %10.4f ms %7.2fx   %s\n", op, ts * 1e3, tp * 1e3,
              ts / tp, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
  const std::size_t n = 64 * 64 * 48; // vector length
  const std::size_t m = 48;           // basis rows
  Rng rng;

  std::vector<double> x(n), y0(n), ys(n), yp(n), w(n), diag(n);
  rng.fill(x);
  rng.fill(y0);
  rng.fill(w);
  rng.fill(diag);
  std::vector<double> basis(m * n), coef(m), outs(m), outp(m);
  rng.fill(basis);
  rng.fill(coef);

  StencilShape shape;
  shape.npts = {64, 64, 48};
  shape.hop_hz = {1.25, 1.25, 2.5};
  shape.dim = 3;

  std::printf("%-22s %13s %13s %9s   %s\n", "op", "serial", "openmp", "speedup",
              "outputs");

  {
    double rs = 0, rp = 0;
    const double ts =
        time_best([&] { rs = spinsim::kernels_serial::dot(x.data(), y0.data(), n); }, 20);
    const double tp =
        time_best([&] { rp = spinsim::kernels_omp::dot(x.data(), y0.data(), n); }, 20);
    report("dot", ts, tp, rs == rp);
  }
  {
    double rs = 0, rp = 0;
    const double ts =
        time_best([&] { rs = spinsim::kernels_serial::nrm2sq(x.data(), n); }, 20);
    const double tp =
        time_best([&] { rp = spinsim::kernels_omp::nrm2sq(x.data(), n); }, 20);
    report("nrm2sq", ts, tp, rs == rp);
  }
  {
    ys = y0;
    yp = y0;
    const double ts =
        time_best([&] { spinsim::kernels_serial::axpy(0.5, x.data(), ys.data(), n); }, 20);
    const double tp =
        time_best([&] { spinsim::kernels_omp::axpy(0.5, x.data(), yp.data(), n); }, 20);
    report("axpy", ts, tp, same_bits(ys, yp));
  }
  {
    const double ts = time_best(
        [&] { spinsim::kernels_serial::stencil_apply(shape, diag.data(), x.data(), ys.data()); },
        10);
    const double tp = time_best(
        [&] { spinsim::kernels_omp::stencil_apply(shape, diag.data(), x.data(), yp.data()); },
        10);
    report("stencil_apply", ts, tp, same_bits(ys, yp));
  }
  {
    const double ts = time_best(
        [&] { spinsim::kernels_serial::row_dots(basis.data(), m, n, x.data(), outs.data()); },
        10);
    const double tp = time_best(
        [&] { spinsim::kernels_omp::row_dots(basis.data(), m, n, x.data(), outp.data()); },
        10);
    report("row_dots", ts, tp, same_bits(outs, outp));
  }
  {
    ys = x;
    yp = x;
    const double ts = time_best(
        [&] {
          spinsim::kernels_serial::subtract_combination(basis.data(), m, n, coef.data(),
                                                        ys.data());
        },
        10);
    const double tp = time_best(
        [&] {
          spinsim::kernels_omp::subtract_combination(basis.data(), m, n, coef.data(),
                                                     yp.data());
        },
        10);
    report("subtract_combination", ts, tp, same_bits(ys, yp));
  }
  {
    std::vector<double> gs(m * m), gp(m * m);
    const double ts = time_best(
        [&] { spinsim::kernels_serial::weighted_gram(basis.data(), m, n, w.data(), gs.data()); },
        5);
    const double tp = time_best(
        [&] { spinsim::kernels_omp::weighted_gram(basis.data(), m, n, w.data(), gp.data()); },
        5);
    report("weighted_gram", ts, tp, same_bits(gs, gp));
  }
  {
    const std::size_t l = m / 2;
    std::vector<double> rot(m * l);
    rng.fill(rot);
    std::vector<double> bs = basis, bp = basis;
    const double ts = time_best(
        [&] {
          bs = basis;
          spinsim::kernels_serial::rotate_inplace(bs.data(), m, n, rot.data(), l);
        },
        5);
    const double tp = time_best(
        [&] {
          bp = basis;
          spinsim::kernels_omp::rotate_inplace(bp.data(), m, n, rot.data(), l);
        },
        5);
    report("rotate_inplace", ts, tp, same_bits(bs, bp));
  }
  return 0;
}

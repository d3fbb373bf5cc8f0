#include "spinsim/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

HomogeneousResult homogeneous_rate_qcr(double q_hz, double q_cr_hz, double mass_kg) {
  using namespace constants;
  HomogeneousResult out;
  out.q_cr_hz = q_cr_hz;
  const double edge = q_cr_hz + std::abs(q_cr_hz);
  if (q_hz >= edge) {
    out.regime = HomogeneousRegime::stable;
    return out;
  }
  if (q_hz > q_cr_hz) {
    out.regime = HomogeneousRegime::unstable_zero_k;
    const double d = q_hz - q_cr_hz;
    out.rate_hz = std::sqrt(std::max(0.0, q_cr_hz * q_cr_hz - d * d));
    return out;
  }
  // q <= q_cr: rate saturates at |q_cr|; fastest modes sit at the kinetic
  // energy hbar^2 k^2 / 2m = h (q_cr - q).
  out.regime = HomogeneousRegime::unstable_finite_k;
  out.rate_hz = std::abs(q_cr_hz);
  out.k_max_inv_m = std::sqrt(2.0 * mass_kg * hz_to_joule(q_cr_hz - q_hz)) / HBAR;
  return out;
}

HomogeneousResult homogeneous_rate(double q_hz, double u1_hz_m3, double density_m3,
                                   double mass_kg) {
  return homogeneous_rate_qcr(q_hz, -u1_hz_m3 * density_m3, mass_kg);
}

std::vector<double> box_levels_1d_hz(double width_m, double mass_kg, int count) {
  if (!(width_m > 0.0) || !(mass_kg > 0.0) || count < 1)
    throw ValidationError("box levels need positive width, mass and count");
  const double eps1 = constants::PLANCK_H / (8.0 * mass_kg * width_m * width_m);
  std::vector<double> levels(count);
  for (int k = 0; k < count; ++k) levels[k] = (k + 1.0) * (k + 1.0) * eps1;
  return levels;
}

double box_detuning_hz(double q_hz, double u1_hz_m3, double density_m3) {
  // eta(q) = -q - U1 n0 / h: the level energy a resonance requires. Reduces
  // to |q| - U1 n0 / h in the U1 > 0, q < 0 regime and keeps the resonance
  // condition eps_n + q + U1 n0 / h = 0 for either sign of U1.
  return -q_hz - u1_hz_m3 * density_m3;
}

BoxModelResult box_rate(double q_hz, double u1_hz_m3, double density_m3,
                        const std::vector<double>& levels_hz) {
  if (levels_hz.empty()) throw ValidationError("box model needs at least one level");
  for (std::size_t i = 1; i < levels_hz.size(); ++i)
    if (!(levels_hz[i] > levels_hz[i - 1]))
      throw ValidationError("box levels must be strictly increasing");

  const double ubar = u1_hz_m3 * density_m3; // U1 n0 / h, signed
  const double eta = box_detuning_hz(q_hz, u1_hz_m3, density_m3);

  auto level_rate = [&](int n) {
    const double s = (levels_hz[n] + q_hz) * (levels_hz[n] + q_hz + 2.0 * ubar);
    return s < 0.0 ? std::sqrt(-s) : 0.0;
  };

  BoxModelResult out;
  out.per_level.resize(levels_hz.size());
  for (std::size_t n = 0; n < levels_hz.size(); ++n)
    out.per_level[n] = {static_cast<int>(n), levels_hz[n], level_rate(static_cast<int>(n))};

  const bool select_by_eta =
      levels_hz.size() >= 2 && eta > 0.5 * (levels_hz[0] + levels_hz[1]);
  int best = 0;
  if (select_by_eta) {
    // Deep regime: the level closest to eta(q) is the fastest-growing one.
    for (std::size_t n = 1; n < levels_hz.size(); ++n)
      if (std::abs(levels_hz[n] - eta) < std::abs(levels_hz[best] - eta))
        best = static_cast<int>(n);
  } else {
    for (std::size_t n = 1; n < levels_hz.size(); ++n)
      if (out.per_level[n].rate_hz > out.per_level[best].rate_hz)
        best = static_cast<int>(n);
  }
  out.level = best;
  out.rate_hz = out.per_level[best].rate_hz;

  double closest = std::abs(levels_hz[0] - eta);
  for (std::size_t n = 1; n < levels_hz.size(); ++n)
    closest = std::min(closest, std::abs(levels_hz[n] - eta));
  out.resonant = closest <= 1e-9;
  return out;
}

} // namespace spinsim

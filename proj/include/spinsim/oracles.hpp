#ifndef SPINSIM_ORACLES_HPP
#define SPINSIM_ORACLES_HPP

#include <vector>

namespace spinsim {

/// Closed forms for the uniform system and for the single-resonance box
/// model. These are independent of the finite-difference pipeline and serve
/// as ground truth in tests; the CLI also exposes them for quick checks.

enum class HomogeneousRegime { stable, unstable_zero_k, unstable_finite_k };

/// Uniform condensate of density n0. All energies E/h in Hz.
/// With q_cr = -U1 n0 / h:
///   q >= q_cr + |q_cr|            -> stable, rate 0
///   q_cr < q < q_cr + |q_cr|      -> rate sqrt(q_cr^2 - (q - q_cr)^2), k = 0 fastest
///   q <= q_cr                     -> rate |q_cr|, fastest k from eps_k = q_cr - q
struct HomogeneousResult {
  HomogeneousRegime regime = HomogeneousRegime::stable;
  double rate_hz = 0.0;    // Lambda(q)
  double q_cr_hz = 0.0;
  double k_max_inv_m = 0.0; // wavenumber of the fastest-growing mode
};

HomogeneousResult homogeneous_rate(double q_hz, double u1_hz_m3, double density_m3,
                                   double mass_kg);

/// Same closed form parameterized by q_cr directly (CLI convenience).
HomogeneousResult homogeneous_rate_qcr(double q_hz, double q_cr_hz, double mass_kg);

/// Box of hard walls: discrete kinetic levels eps_k = (k+1)^2 eps_1,
/// eps_1 = h / (8 m L^2) in Hz for width L. Pair creation couples each level
/// only to itself, so per level
///   xi_k^2 = (eps_k + q)(eps_k + q + 2 U1 n0 / h)
/// and the growth rate is max_k Im xi_k. The rate touches its ceiling
/// U1 n0 / h exactly when some level sits at eps_k = |q| - U1 n0 / h.
struct BoxLevelRate {
  int level = 0;           // 0-based: ground level has index 0
  double eps_hz = 0.0;
  double rate_hz = 0.0;
};

struct BoxModelResult {
  double rate_hz = 0.0;    // max over levels
  int level = 0;           // argmax
  bool resonant = false;   // rate equals the ceiling (within fp round-off)
  std::vector<BoxLevelRate> per_level;
};

std::vector<double> box_levels_1d_hz(double width_m, double mass_kg, int count);

BoxModelResult box_rate(double q_hz, double u1_hz_m3, double density_m3,
                        const std::vector<double>& levels_hz);

/// Detuning eta(q) = |q| - U1 n0 / h whose proximity to a level sets the
/// local maxima of the box-model rate.
double box_detuning_hz(double q_hz, double u1_hz_m3, double density_m3);

} // namespace spinsim

#endif

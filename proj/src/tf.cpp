#include "spinsim/tf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

std::vector<double> potential_on_grid(const GridSpec& grid, const TrapGeometry& trap,
                                      double mass_kg) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = trap.potential_hz(grid.point(i), mass_kg);
  return v;
}

// Discrete atom count for a trial mu; piecewise linear and increasing in mu.
double atoms_at(double mu_hz, const std::vector<double>& v_hz, double u0_hz_m3,
                double cell_volume) {
  double acc = 0.0;
  for (double v : v_hz) acc += std::max(0.0, mu_hz - v);
  return acc * cell_volume / u0_hz_m3;
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 * std::numbers::pi / 3.0;
  }
}

} // namespace

double mu_tf_estimate(const TrapGeometry& trap, const SpeciesParams& species,
                      double atom_number) {
  using namespace constants;
  if (trap.kind == TrapGeometry::Kind::box) {
    double vol = 1.0;
    for (int a = 0; a < trap.dim; ++a) vol *= 2.0 * trap.half_width_m[a];
    return joule_to_hz(atom_number * species.u0 / vol);
  }
  const int d = trap.dim;
  double omega_prod = 1.0;
  for (int a = 0; a < d; ++a) omega_prod *= trap.omega_rad[a];
  const double rhs = atom_number * species.u0 * (d + 2) * omega_prod *
                     std::pow(species.mass_kg / 2.0, d / 2.0) /
                     (2.0 * unit_ball_volume(d));
  return joule_to_hz(std::pow(rhs, 2.0 / (d + 2)));
}

CondensateState solve_tf(const GridSpec& grid, const TrapGeometry& trap,
                         const SpeciesParams& species, double atom_number) {
  if (!(atom_number > 0.0)) throw ValidationError("atom number must be positive");
  const double u0 = species.u0_hz_m3();
  const std::vector<double> v = potential_on_grid(grid, trap, species.mass_kg);
  const double cell = grid.cell_volume();

  const double v_min = *std::min_element(v.begin(), v.end());
  const double est = mu_tf_estimate(trap, species, atom_number);
  double lo = v_min;
  double hi = v_min + 10.0 * std::max(est - v_min, est);
  while (atoms_at(hi, v, u0, cell) < atom_number) {
    hi = v_min + 2.0 * (hi - v_min);
    if (!std::isfinite(hi)) throw NumericError("chemical potential bracket diverged");
  }

  // Bisection on the discrete integral; terminates at 1e-10 relative on N.
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mu = 0.5 * (lo + hi);
    const double n_mu = atoms_at(mu, v, u0, cell);
    if (std::abs(n_mu - atom_number) <= 1e-10 * atom_number) break;
    (n_mu < atom_number ? lo : hi) = mu;
  }

  CondensateState state;
  state.mu_hz = mu;
  state.n0 = Field(grid);
  double peak = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double n = std::max(0.0, (mu - v[i]) / u0);
    state.n0[i] = n;
    peak = std::max(peak, n);
  }
  state.peak_density_m3 = peak;
  state.atom_number = atoms_at(mu, v, u0, cell);

  if (trap.kind == TrapGeometry::Kind::harmonic) {
    // The cloud must not touch the grid edge; a nonzero boundary density
    // means the margin is too small for this mu.
    const auto& g = grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t ix = i % g.npts[0];
      const std::size_t iy = (i / g.npts[0]) % g.npts[1];
      const std::size_t iz = i / (static_cast<std::size_t>(g.npts[0]) * g.npts[1]);
      bool on_edge = false;
      if (g.dim >= 1) on_edge |= (ix == 0 || ix + 1 == static_cast<std::size_t>(g.npts[0]));
      if (g.dim >= 2) on_edge |= (iy == 0 || iy + 1 == static_cast<std::size_t>(g.npts[1]));
      if (g.dim >= 3) on_edge |= (iz == 0 || iz + 1 == static_cast<std::size_t>(g.npts[2]));
      if (on_edge && state.n0[i] > 0.0)
        throw DomainError(
            "condensate reaches the grid boundary; increase the grid margin");
    }
  }
  return state;
}

EffectiveFields effective_fields(const CondensateState& state, const TrapGeometry& trap,
                                 const SpeciesParams& species) {
  const GridSpec& grid = state.n0.grid;
  EffectiveFields out;
  out.v_eff_hz = Field(grid);
  out.omega_eff_hz = Field(grid);
  out.mu_hz = state.mu_hz;
  out.peak_density_m3 = state.peak_density_m3;
  const double u0 = species.u0_hz_m3();
  const double u1 = species.u1_hz_m3();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = trap.potential_hz(grid.point(i), species.mass_kg);
    const double n = state.n0[i];
    out.v_eff_hz[i] = v + (u0 + u1) * n - state.mu_hz;
    out.omega_eff_hz[i] = u1 * n;
  }
  return out;
}

std::array<double, 3> tf_radii_m(double mu_hz, const TrapGeometry& trap,
                                 double mass_kg) {
  std::array<double, 3> r = {0.0, 0.0, 0.0};
  if (trap.kind == TrapGeometry::Kind::box) {
    for (int a = 0; a < trap.dim; ++a) r[a] = trap.half_width_m[a];
    return r;
  }
  const double mu_j = constants::hz_to_joule(mu_hz);
  for (int a = 0; a < trap.dim; ++a)
    r[a] = std::sqrt(2.0 * mu_j / mass_kg) / trap.omega_rad[a];
  return r;
}

double healing_length_m(const SpeciesParams& species, double peak_density_m3) {
  using namespace constants;
  if (!(peak_density_m3 > 0.0))
    throw ValidationError("healing length needs a positive peak density");
  return HBAR / std::sqrt(2.0 * species.mass_kg * species.u0 * peak_density_m3);
}

GridSpec make_harmonic_grid(const TrapGeometry& trap, const SpeciesParams& species,
                            double atom_number, std::array<int, 3> npts,
                            double margin) {
  if (trap.kind != TrapGeometry::Kind::harmonic)
    throw ValidationError("make_harmonic_grid needs a harmonic trap");
  if (!(margin >= 1.2))
    throw ValidationError("grid margin must be at least 1.2 (got " +
                          std::to_string(margin) + ")");
  const double mu_est = mu_tf_estimate(trap, species, atom_number);
  const auto radii = tf_radii_m(mu_est, trap, species.mass_kg);
  std::array<double, 3> extent = {1.0, 1.0, 1.0};
  for (int a = 0; a < trap.dim; ++a) extent[a] = margin * radii[a];
  return GridSpec::centered(trap.dim, npts, extent);
}

} // namespace spinsim

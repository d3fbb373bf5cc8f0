#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/species.hpp"
#include "spinsim/tf.hpp"
#include "spinsim/trap.hpp"

using namespace spinsim;

namespace {

SpeciesParams toy_species(double a2 = 5.2e-9) {
  return build_species("toy", 1.44e-25, 1, {{0, 5.0e-9}, {2, a2}});
}

// mu^{5/2} = 15 N U0 m^{3/2} wx wy wz / (16 sqrt(2) pi), written out from the
// normalization integral of the parabolic profile. Joules, then converted.
double mu_closed_form_3d_hz(const SpeciesParams& s, std::array<double, 3> freqs_hz,
                            double n_atoms) {
  const double pi = std::numbers::pi;
  double wprod = 1.0;
  for (double f : freqs_hz) wprod *= 2.0 * pi * f;
  const double rhs = 15.0 * n_atoms * s.u0 * std::pow(s.mass_kg, 1.5) * wprod /
                     (16.0 * std::sqrt(2.0) * pi);
  return constants::joule_to_hz(std::pow(rhs, 0.4));
}

double discrete_number(const Field& n0) {
  double acc = 0.0;
  for (double v : n0.values) acc += v;
  return acc * n0.grid.cell_volume();
}

} // namespace

TEST_CASE("3d harmonic chemical potential matches the closed form") {
  auto s = toy_species();
  const std::array<double, 3> freqs = {120.0, 90.0, 40.0};
  auto trap = TrapGeometry::harmonic(3, freqs);
  const double n_atoms = 5e4;

  auto grid = make_harmonic_grid(trap, s, n_atoms, {49, 49, 49}, 1.3);
  auto state = solve_tf(grid, trap, s, n_atoms);

  const double mu_ref = mu_closed_form_3d_hz(s, freqs, n_atoms);
  CHECK(state.mu_hz == doctest::Approx(mu_ref).epsilon(5e-3));
  CHECK(mu_tf_estimate(trap, s, n_atoms) == doctest::Approx(mu_ref).epsilon(1e-12));

  SUBCASE("mass conservation on the grid") {
    CHECK(discrete_number(state.n0) == doctest::Approx(n_atoms).epsilon(1e-6));
    CHECK(state.atom_number == doctest::Approx(n_atoms).epsilon(1e-6));
  }
  SUBCASE("doubling N scales mu by 2^(2/5)") {
    auto grid2 = make_harmonic_grid(trap, s, 2 * n_atoms, {49, 49, 49}, 1.3);
    auto state2 = solve_tf(grid2, trap, s, 2 * n_atoms);
    CHECK(state2.mu_hz / state.mu_hz ==
          doctest::Approx(std::pow(2.0, 0.4)).epsilon(1e-3));
  }
  SUBCASE("density nonnegative and clamped outside the surface") {
    double mn = 1e300;
    for (double v : state.n0.values) mn = std::min(mn, v);
    CHECK(mn == 0.0);
    for (std::size_t i = 0; i < state.n0.size(); ++i) {
      const auto p = state.n0.grid.point(i);
      if (trap.potential_hz(p, s.mass_kg) >= state.mu_hz) CHECK(state.n0[i] == 0.0);
    }
  }
  SUBCASE("TF radii match sqrt(2 mu / m) / omega") {
    auto radii = tf_radii_m(state.mu_hz, trap, s.mass_kg);
    for (int a = 0; a < 3; ++a) {
      const double w = 2.0 * std::numbers::pi * freqs[static_cast<std::size_t>(a)];
      const double r = std::sqrt(2.0 * constants::hz_to_joule(state.mu_hz) / s.mass_kg) / w;
      CHECK(radii[static_cast<std::size_t>(a)] == doctest::Approx(r).epsilon(1e-12));
    }
  }
}

TEST_CASE("peak density follows N^0.4 for 3d harmonic traps") {
  auto s = toy_species();
  auto trap = TrapGeometry::harmonic(3, {120.0, 90.0, 40.0});
  const std::vector<double> ns = {1e4, 3.16e4, 1e5, 3.16e5, 1e6};
  std::vector<double> lx, ly;
  for (double n_atoms : ns) {
    auto grid = make_harmonic_grid(trap, s, n_atoms, {49, 49, 49}, 1.3);
    auto state = solve_tf(grid, trap, s, n_atoms);
    lx.push_back(std::log(n_atoms));
    ly.push_back(std::log(state.peak_density_m3));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope == doctest::Approx(0.400).epsilon(0.0125)); // 0.400 +- 0.005
}

TEST_CASE("box trap profile is flat with the wall-inset peak factor") {
  auto s = toy_species();
  const double width = 2.0e-5;
  auto trap = TrapGeometry::box(1, {width / 2, 0, 0});
  auto grid = GridSpec::box_interior(1, {127, 1, 1}, {width / 2, 0, 0});
  const double n_atoms = 4e15;
  auto state = solve_tf(grid, trap, s, n_atoms);

  // continuum: mu = N U0 / width; the inset grid covers width*n/(n+1), so the
  // discrete normalization lifts the flat level by (n+1)/n exactly.
  const double mu_cont = constants::joule_to_hz(n_atoms * s.u0 / width);
  CHECK(mu_tf_estimate(trap, s, n_atoms) == doctest::Approx(mu_cont).epsilon(1e-12));
  CHECK(state.mu_hz == doctest::Approx(mu_cont * 128.0 / 127.0).epsilon(1e-10));
  CHECK(state.peak_density_m3 ==
        doctest::Approx((n_atoms / width) * 128.0 / 127.0).epsilon(1e-10));
  double mn = 1e300, mx = 0;
  for (double v : state.n0.values) { mn = std::min(mn, v); mx = std::max(mx, v); }
  CHECK(mn == doctest::Approx(mx).epsilon(1e-14)); // flat
  CHECK(discrete_number(state.n0) == doctest::Approx(n_atoms).epsilon(1e-9));
}

TEST_CASE("cloud touching the grid boundary is a domain error") {
  auto s = toy_species();
  auto trap = TrapGeometry::harmonic(2, {80.0, 50.0});
  auto grid = make_harmonic_grid(trap, s, 1e5, {41, 41, 1}, 1.3);
  // shrink the grid below the TF radius: same spacing count, 0.8x extent
  GridSpec tight = grid;
  for (int a = 0; a < 2; ++a) {
    tight.spacing_m[static_cast<std::size_t>(a)] *= 0.65;
    tight.origin_m[static_cast<std::size_t>(a)] *= 0.65;
  }
  CHECK_THROWS_AS(solve_tf(tight, trap, s, 1e5), DomainError);
}

TEST_CASE("effective fields implement the pair-creation potentials") {
  // u1 > 0 here: F=1 channels swapped so the dome shape is testable
  auto s = build_species("toy", 1.44e-25, 1, {{0, 5.0e-9}, {2, 5.4e-9}});
  auto trap = TrapGeometry::harmonic(2, {90.0, 40.0});
  auto grid = make_harmonic_grid(trap, s, 2e5, {61, 61, 1}, 1.4);
  auto state = solve_tf(grid, trap, s, 2e5);
  auto fields = effective_fields(state, trap, s);

  REQUIRE(fields.v_eff_hz.grid.same_as(grid));
  const double u0 = s.u0_hz_m3(), u1 = s.u1_hz_m3();

  SUBCASE("pointwise definitions") {
    for (std::size_t i = 0; i < grid.size(); i += 7) {
      const auto p = grid.point(i);
      const double v = trap.potential_hz(p, s.mass_kg);
      const double want_veff = v + (u0 + u1) * state.n0[i] - state.mu_hz;
      CHECK(fields.v_eff_hz[i] == doctest::Approx(want_veff).epsilon(1e-12));
      CHECK(fields.omega_eff_hz[i] ==
            doctest::Approx(u1 * state.n0[i]).epsilon(1e-12));
    }
  }
  SUBCASE("mexican hat: dome at the center, zero floor at the surface") {
    const std::size_t c = grid.index(30, 30, 0);
    CHECK(fields.v_eff_hz[c] ==
          doctest::Approx((u1 / u0) * state.mu_hz).epsilon(1e-10));
    CHECK(fields.omega_eff_hz[c] ==
          doctest::Approx(u1 * state.peak_density_m3).epsilon(1e-12));
    double mn = 1e300;
    for (double v : fields.v_eff_hz.values) mn = std::min(mn, v);
    CHECK(mn >= 0.0);
    // the minimum sits on the TF surface; bound by the local potential change
    // across two grid cells there
    const auto radii = tf_radii_m(state.mu_hz, trap, s.mass_kg);
    const double slope_hz_per_m =
        2.0 * state.mu_hz / radii[1]; // d/dr of the trap term at R, soft axis
    CHECK(mn <= 2.0 * slope_hz_per_m * grid.spacing_m[1]);
  }
  SUBCASE("u1 = 0 collapses v_eff to max(0, V - mu)") {
    auto s0 = build_species("flat", 1.44e-25, 1, {{0, 5.2e-9}, {2, 5.2e-9}});
    CHECK(s0.u1 == doctest::Approx(0.0));
    auto st = solve_tf(grid, trap, s0, 2e5);
    auto ff = effective_fields(st, trap, s0);
    for (std::size_t i = 0; i < grid.size(); i += 11) {
      const auto p = grid.point(i);
      const double v = trap.potential_hz(p, s0.mass_kg);
      const double want = std::max(0.0, v - st.mu_hz);
      CHECK(ff.v_eff_hz[i] == doctest::Approx(want).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("healing length and grid sizing") {
  auto s = toy_species();
  const double n_pk = 2e20;
  const double xi = constants::HBAR / std::sqrt(2.0 * s.mass_kg * s.u0 * n_pk);
  CHECK(healing_length_m(s, n_pk) == doctest::Approx(xi).epsilon(1e-12));

  auto trap = TrapGeometry::harmonic(3, {176.0, 132.0, 46.0});
  auto grid = make_harmonic_grid(trap, s, 7e4, {33, 33, 49}, 1.25);
  const double mu = mu_tf_estimate(trap, s, 7e4);
  auto radii = tf_radii_m(mu, trap, s.mass_kg);
  for (int a = 0; a < 3; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    const double half = -grid.origin_m[ia];
    CHECK(half == doctest::Approx(1.25 * radii[ia]).epsilon(1e-10));
    const double last = grid.coord(a, grid.npts[ia] - 1);
    CHECK(last == doctest::Approx(1.25 * radii[ia]).epsilon(1e-10));
  }
}

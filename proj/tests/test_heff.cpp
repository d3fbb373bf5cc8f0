#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/species.hpp"
#include "spinsim/tf.hpp"
#include "spinsim/trap.hpp"

using namespace spinsim;

namespace {

const double kMass = 1.44e-25;

double hop_hz_for(double spacing) {
  return constants::HBAR / (4.0 * std::numbers::pi * kMass * spacing * spacing);
}

// lowest eigenvalue of the kinetic stencil on an n-point box interior
double lowest_dense_box(int n, double width) {
  auto grid = GridSpec::box_interior(1, {n, 1, 1}, {width / 2, 0, 0});
  auto ham = make_stencil(grid, kMass, std::vector<double>(grid.size(), 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham.to_dense(),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace

TEST_CASE("stencil matrix is symmetric with the kinetic hopping") {
  auto grid = GridSpec::centered(2, {5, 4, 1}, {1e-5, 8e-6, 0});
  std::vector<double> extra(grid.size());
  for (std::size_t i = 0; i < extra.size(); ++i) extra[i] = 0.1 * static_cast<double>(i);
  auto ham = make_stencil(grid, kMass, extra);
  auto h = ham.to_dense();

  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const double tx = hop_hz_for(grid.spacing_m[0]);
  const double ty = hop_hz_for(grid.spacing_m[1]);
  CHECK(h(1, 0) == doctest::Approx(-tx).epsilon(1e-14));
  CHECK(h(5, 0) == doctest::Approx(-ty).epsilon(1e-14));
  CHECK(h(0, 0) == doctest::Approx(2 * tx + 2 * ty + extra[0]).epsilon(1e-14));
  CHECK(h(7, 7) == doctest::Approx(2 * tx + 2 * ty + extra[7]).epsilon(1e-14));
  // no hopping across the x-row wrap
  CHECK(h(5, 4) == 0.0);
}

TEST_CASE("box ground level converges at second order in the spacing") {
  const double width = 1e-5;
  const double exact = constants::PLANCK_H / (8.0 * kMass * width * width);
  const double e_coarse = std::abs(lowest_dense_box(32, width) - exact);
  const double e_fine = std::abs(lowest_dense_box(64, width) - exact);
  CHECK(e_coarse / e_fine >= 3.5);
  CHECK(e_fine < 0.01 * exact);
}

TEST_CASE("discretization of the effective potential") {
  auto s = build_species("toy", kMass, 1, {{0, 5.0e-9}, {2, 5.4e-9}});
  auto trap = TrapGeometry::harmonic(2, {90.0, 40.0});
  auto grid = make_harmonic_grid(trap, s, 2e5, {41, 41, 1}, 1.3);
  auto state = solve_tf(grid, trap, s, 2e5);
  auto fields = effective_fields(state, trap, s);

  auto ham = discretize_heff(fields, s, 4.0);
  CHECK(ham.grid.same_as(grid));
  const double tx = hop_hz_for(grid.spacing_m[0]);
  const double ty = hop_hz_for(grid.spacing_m[1]);
  CHECK(ham.shape.hop_hz[0] == doctest::Approx(tx).epsilon(1e-14));
  const std::size_t c = grid.index(20, 20, 0);
  CHECK(ham.diag_hz[c] ==
        doctest::Approx(fields.v_eff_hz[c] + 2 * tx + 2 * ty).epsilon(1e-13));

  SUBCASE("apply agrees with the dense matrix") {
    Eigen::VectorXd x = Eigen::VectorXd::Random(static_cast<Eigen::Index>(grid.size()));
    std::vector<double> y(grid.size());
    ham.apply(x.data(), y.data());
    Eigen::VectorXd yd = ham.to_dense() * x;
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(y[i] == doctest::Approx(yd(static_cast<Eigen::Index>(i))).epsilon(1e-12));
  }
  SUBCASE("under-resolved grids are rejected") {
    CHECK_THROWS_AS(discretize_heff(fields, s, 0.005), ResolutionError);
  }
}

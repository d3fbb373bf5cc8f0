#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "spinsim/errors.hpp"
#include "spinsim/grid.hpp"
#include "spinsim/lanczos.hpp"
#include "spinsim/sweep.hpp"

using namespace spinsim;

namespace {

ModeBasis diag_basis(std::vector<double> energies) {
  // sweep_lambda only consumes energies and the coupling matrix; a minimal
  // grid keeps the struct well-formed
  ModeBasis b;
  b.grid = GridSpec::centered(1, {3, 1, 1}, {1e-6, 0, 0});
  b.count = static_cast<int>(energies.size());
  b.energies_hz = std::move(energies);
  b.modes.assign(static_cast<std::size_t>(b.count) * b.grid.size(), 0.0);
  return b;
}

double arc(double q, double qt) {
  const double s = qt * qt - (q - qt) * (q - qt);
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

} // namespace

TEST_CASE("linspace endpoints and spacing") {
  auto v = linspace(-2.0, 3.0, 11);
  REQUIRE(v.size() == 11);
  CHECK(v.front() == -2.0);
  CHECK(v.back() == 3.0);
  for (int i = 0; i < 11; ++i)
    CHECK(v[static_cast<std::size_t>(i)] == doctest::Approx(-2.0 + 0.5 * i));
  CHECK(linspace(4.0, 4.0, 1).size() == 1);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), ValidationError);
}

TEST_CASE("sweep locates the per-level resonances of a diagonal model") {
  // three levels with overlapping 25 Hz arcs: each level resonates where its
  // detuning eps + q vanishes, and neighboring arcs cross in a minimum
  const std::vector<double> eps = {10.0, 40.0, 80.0};
  auto basis = diag_basis(eps);
  Eigen::MatrixXd a = 25.0 * Eigen::MatrixXd::Identity(3, 3);
  auto qs = linspace(-110.0, 15.0, 501);
  auto sweep = sweep_lambda(basis, a, qs);

  REQUIRE(sweep.q_hz.size() == 501);
  REQUIRE(sweep.maxima.size() == 3);
  REQUIRE(sweep.minima.size() == 2);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(sweep.maxima[k].q_hz == doctest::Approx(-eps[2 - k]).epsilon(0.02));
    CHECK(sweep.maxima[k].lambda_hz == doctest::Approx(25.0).epsilon(1e-3));
  }
  CHECK(sweep.lambda_max_hz <= 25.0 + 1e-9);
  // crossing of the two lower arcs: sqrt(25^2 - 15^2) = 20
  CHECK(sweep.minima[1].q_hz == doctest::Approx(-25.0).epsilon(0.02));
  CHECK(sweep.minima[1].lambda_hz == doctest::Approx(20.0).epsilon(1e-2));
  CHECK(sweep.minima[0].q_hz > sweep.maxima[0].q_hz);
  CHECK(sweep.minima[0].q_hz < sweep.maxima[1].q_hz);

  SUBCASE("unstable counts are recorded per sample") {
    bool any = false;
    for (std::size_t i = 0; i < sweep.q_hz.size(); ++i)
      if (sweep.unstable_count[i] > 0) any = true;
    CHECK(any);
  }
}

TEST_CASE("sweep input validation") {
  auto basis = diag_basis({10.0, 20.0});
  Eigen::MatrixXd a = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(sweep_lambda(basis, a, linspace(-10, 0, 15)), ValidationError);
  std::vector<double> bad = linspace(-10, 0, 20);
  bad[7] = bad[6]; // not strictly increasing
  CHECK_THROWS_AS(sweep_lambda(basis, a, bad), ValidationError);
}

TEST_CASE("critical-q fit recovers the arc parameter") {
  const double qt = -31.4159;
  auto qs = linspace(2.0 * qt, 0.0, 301);
  std::vector<double> lam(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) lam[i] = arc(qs[i], qt);
  CHECK(fit_q_tilde_cr(qs, lam) == doctest::Approx(qt).epsilon(1e-6));

  SUBCASE("60% truncation stays within 5%") {
    // keep only the shallow 60% of the lobe adjacent to q = 0
    std::vector<double> q2, l2;
    for (std::size_t i = 0; i < qs.size(); ++i)
      if (qs[i] >= 2.0 * qt * 0.6) {
        q2.push_back(qs[i]);
        l2.push_back(lam[i]);
      }
    CHECK(fit_q_tilde_cr(q2, l2) == doctest::Approx(qt).epsilon(0.05));
  }
  SUBCASE("noise robustness at the percent level") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.01 * std::abs(qt));
    auto l3 = lam;
    for (auto& v : l3)
      if (v > 0) v = std::max(0.0, v + noise(rng));
    CHECK(fit_q_tilde_cr(qs, l3) == doctest::Approx(qt).epsilon(0.03));
  }
  SUBCASE("no unstable samples is a domain error") {
    std::vector<double> zero(qs.size(), 0.0);
    CHECK_THROWS_AS(fit_q_tilde_cr(qs, zero), DomainError);
  }
  SUBCASE("mismatched arrays are rejected") {
    std::vector<double> short_lam(qs.size() - 1, 1.0);
    CHECK_THROWS_AS(fit_q_tilde_cr(qs, short_lam), ValidationError);
  }
}

TEST_CASE("power-law fit is exact on synthetic data") {
  const std::vector<double> ns = {2e4, 4e4, 7e4, 1.4e5};
  std::vector<double> qres(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) qres[i] = 3.7 * std::pow(ns[i], 0.4);
  auto fit = scaling_fit(ns, qres);
  CHECK(fit.gamma == doctest::Approx(0.400).epsilon(1e-12));
  CHECK(fit.gamma_stderr == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(std::exp(fit.log_prefactor) == doctest::Approx(3.7).epsilon(1e-10));
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-12);

  SUBCASE("validation") {
    CHECK_THROWS_AS(scaling_fit({1e4}, {5.0}), ValidationError);
    CHECK_THROWS_AS(scaling_fit({1e4, 2e4}, {5.0}), ValidationError);
    CHECK_THROWS_AS(scaling_fit({1e4, -2e4}, {5.0, 6.0}), ValidationError);
    CHECK_THROWS_AS(scaling_fit({1e4, 1e4}, {5.0, 6.0}), ValidationError);
  }
}

TEST_CASE("seeded pair growth") {
  // 2 (n + 1/2) sinh^2(2 pi Lambda t) with Lambda = 25 Hz, t = 21 ms, n = 2
  const double s = std::sinh(2.0 * std::numbers::pi * 25.0 * 0.021);
  CHECK(growth_estimate(25.0, 0.021, 2.0) == doctest::Approx(5.0 * s * s).epsilon(1e-12));
  CHECK(growth_estimate(0.0, 1.0, 5.0) == 0.0);
  CHECK(growth_estimate(10.0, 0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(growth_estimate(-1.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(growth_estimate(1.0, -1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(growth_estimate(1.0, 1.0, -0.5), ValidationError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/species.hpp"

using namespace spinsim;

namespace {

double g_of(double a_m, double mass_kg) {
  const double hb = constants::HBAR;
  return 4.0 * std::numbers::pi * hb * hb * a_m / mass_kg;
}

const double kMass = 1.44e-25;

} // namespace

TEST_CASE("interaction strengths carry the exact rational channel weights") {
  const double a0 = 5.0e-9, a2 = 5.2e-9, a4 = 5.6e-9;
  const double g0 = g_of(a0, kMass), g2 = g_of(a2, kMass), g4 = g_of(a4, kMass);

  SUBCASE("F=1") {
    auto s = build_species("x", kMass, 1, {{0, a0}, {2, a2}});
    CHECK(s.u0 == doctest::Approx((g0 + 2 * g2) / 3).epsilon(1e-14));
    CHECK(s.u1 == doctest::Approx((g2 - g0) / 3).epsilon(1e-14));
  }
  SUBCASE("F=2") {
    auto s = build_species("x", kMass, 2, {{0, a0}, {2, a2}, {4, a4}});
    CHECK(s.u0 == doctest::Approx((7 * g0 + 10 * g2 + 18 * g4) / 35).epsilon(1e-14));
    CHECK(s.u1 == doctest::Approx((-7 * g0 - 5 * g2 + 12 * g4) / 35).epsilon(1e-14));
  }
  SUBCASE("map order does not matter: keyed by channel") {
    auto a = build_species("x", kMass, 2, {{0, a0}, {2, a2}, {4, a4}});
    auto b = build_species("x", kMass, 2, {{4, a4}, {0, a0}, {2, a2}});
    CHECK(a.u0 == b.u0);
    CHECK(a.u1 == b.u1);
  }
}

TEST_CASE("u1 sign follows the channel ordering") {
  // a2 > a0 makes the F=1 spin term attractive-free (u1 > 0); swapping gives u1 < 0.
  auto up = build_species("x", kMass, 1, {{0, 5.0e-9}, {2, 5.4e-9}});
  auto dn = build_species("x", kMass, 1, {{0, 5.4e-9}, {2, 5.0e-9}});
  CHECK(up.u1 > 0.0);
  CHECK(dn.u1 < 0.0);
}

TEST_CASE("hz bookkeeping round-trips through joules") {
  auto s = build_species("x", kMass, 1, {{0, 5.0e-9}, {2, 5.2e-9}});
  const double back = constants::joule_to_hz(constants::hz_to_joule(s.u0_hz_m3()));
  CHECK(back == doctest::Approx(s.u0_hz_m3()).epsilon(1e-12));
  CHECK(s.u0_hz_m3() == doctest::Approx(s.u0 / constants::PLANCK_H).epsilon(1e-15));
}

TEST_CASE("channel-set validation") {
  CHECK_THROWS_AS(build_species("x", kMass, 1, {{0, 5e-9}}), ConfigError);
  CHECK_THROWS_AS(build_species("x", kMass, 1, {{0, 5e-9}, {2, 5e-9}, {4, 5e-9}}),
                  ConfigError);
  CHECK_THROWS_AS(build_species("x", kMass, 2, {{0, 5e-9}, {2, 5e-9}}), ConfigError);
  CHECK_THROWS_AS(build_species("x", kMass, 3, {{0, 5e-9}, {2, 5e-9}}), ConfigError);
  CHECK_THROWS_AS(build_species("x", kMass, 1, {{0, -5e-9}, {2, 5e-9}}),
                  ValidationError);
  CHECK_THROWS_AS(build_species("x", 0.0, 1, {{0, 5e-9}, {2, 5e-9}}), ValidationError);
}

TEST_CASE("quadratic zeeman law") {
  auto s = build_species("x", kMass, 2, {{0, 5.0e-9}, {2, 5.2e-9}, {4, 5.6e-9}}, -71.0);
  CHECK(b_to_q(0.0, s) == 0.0);
  CHECK(b_to_q(1.0, s) == doctest::Approx(-71.0));
  CHECK(b_to_q(2.0, s) == doctest::Approx(-4.0 * 71.0));
  CHECK(b_to_q(-1.5, s) == b_to_q(1.5, s));

  auto bare = build_species("x", kMass, 1, {{0, 5.0e-9}, {2, 5.2e-9}});
  CHECK_THROWS_AS(b_to_q(1.0, bare), ConfigError);
}

TEST_CASE("preset file loads and resolves") {
  const std::string dir = "/tmp/spinsim_species_test";
  std::system(("mkdir -p " + dir).c_str());
  const std::string path = dir + "/toy_f1.preset";
  {
    std::ofstream f(path);
    f << "name = toy_f1\n"
      << "mass_kg = 1.44e-25\n"
      << "f = 1\n"
      << "a0_m = 5.0e-9\n"
      << "a2_m = 5.2e-9\n"
      << "qze_hz_per_gauss2 = 70.0\n";
  }
  auto s = load_species_preset(path);
  CHECK(s.name == "toy_f1");
  CHECK(s.hyperfine_f == 1);
  CHECK(s.mass_kg == doctest::Approx(1.44e-25));
  CHECK(s.scattering_lengths_m.at(2) == doctest::Approx(5.2e-9));
  CHECK(s.qze_hz_per_gauss2.has_value());
  CHECK(*s.qze_hz_per_gauss2 == doctest::Approx(70.0));

  SUBCASE("missing channel for F=2 rejected") {
    const std::string bad = dir + "/bad_f2.preset";
    std::ofstream f(bad);
    f << "name = bad\nmass_kg = 1.44e-25\nf = 2\na0_m = 5e-9\na2_m = 5e-9\n";
    f.close();
    CHECK_THROWS_AS(load_species_preset(bad), ConfigError);
  }
}

TEST_CASE("shipped rb87 presets have paper-consistent signs") {
  auto f2 = load_species_preset(SPINSIM_SOURCE_PRESETS "/rb87_f2.preset");
  CHECK(f2.hyperfine_f == 2);
  CHECK(f2.u1 > 0.0);
  CHECK(f2.u0 > 0.0);
  CHECK(b_to_q(1.0, f2) < 0.0); // F=2: q < 0 for B > 0

  auto f1 = load_species_preset(SPINSIM_SOURCE_PRESETS "/rb87_f1.preset");
  CHECK(f1.hyperfine_f == 1);
  CHECK(f1.u1 < 0.0);
  CHECK(f1.u0 > 0.0);
  CHECK(b_to_q(1.0, f1) > 0.0); // F=1: q > 0 for B > 0
  // spin interaction is a percent-level fraction of the density interaction
  CHECK(std::abs(f1.u1 / f1.u0) < 0.05);
  CHECK(std::abs(f2.u1 / f2.u0) < 0.10);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "spinsim/errors.hpp"
#include "spinsim/io.hpp"
#include "spinsim/scenario.hpp"

using namespace spinsim;

namespace {

// 1d hard-wall box with an inline species: the fastest self-contained
// end-to-end configuration
std::string tiny_box_text() {
  return "species_name = toy_f2\n"
         "species_mass_kg = 1.44e-25\n"
         "species_f = 2\n"
         "species_a0_m = 4.6e-9\n"
         "species_a2_m = 4.8e-9\n"
         "species_a4_m = 5.2e-9\n"
         "species_qze_hz_per_gauss2 = -70.0\n"
         "trap = box\n"
         "dim = 1\n"
         "box_half_widths_m = 1.0e-5\n"
         "atom_number = 4.0e15\n"
         "grid_npts = 63\n"
         "resolution_relax = 4.0\n"
         "mode_cap = 6\n"
         "energy_cutoff_hz = auto\n"
         "q_min_hz = -70\n"
         "q_max_hz = 0\n"
         "q_steps = 36\n"
         "output_dir = /tmp/spinsim_scenario_test/out\n";
}

} // namespace

TEST_CASE("parse, echo, reparse: fixed point") {
  auto cfg = parse_config_text(tiny_box_text(), "inline");
  CHECK(cfg.species.name == "toy_f2");
  CHECK(cfg.species_ref.empty());
  CHECK(cfg.dim == 1);
  CHECK(cfg.trap_kind == TrapGeometry::Kind::box);
  CHECK(cfg.atom_number == 4.0e15);
  CHECK(cfg.grid_npts[0] == 63);
  CHECK(cfg.mode_cap == 6);
  CHECK(cfg.cutoff_auto);
  CHECK(cfg.q_steps == 36);

  const std::string echo = echo_config(cfg);
  auto cfg2 = parse_config_text(echo, "echo");
  CHECK(cfg2 == cfg);
  // the echo is itself a fixed point
  CHECK(echo_config(cfg2) == echo);
}

TEST_CASE("preset reference loads and round-trips through the echo") {
  auto cfg = load_config(SPINSIM_SOURCE_SCENARIOS "/box_oracle.scenario");
  CHECK(cfg.species_ref == "rb87_f2");
  CHECK(cfg.species.hyperfine_f == 2);
  auto cfg2 = parse_config_text(echo_config(cfg), "echo");
  CHECK(cfg2 == cfg); // species_ref is provenance, not identity
  CHECK(cfg2.species == cfg.species);
}

TEST_CASE("configuration errors cite file, line and field") {
  SUBCASE("unknown key") {
    const std::string text = tiny_box_text() + "turbo_mode = on\n";
    try {
      parse_config_text(text, "bad.scenario");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("bad.scenario:") != std::string::npos);
      CHECK(msg.find("turbo_mode") != std::string::npos);
    }
  }
  SUBCASE("missing species") {
    std::string text = tiny_box_text();
    text = text.substr(text.find("trap ="));
    CHECK_THROWS_AS(parse_config_text(text, "x"), ConfigError);
  }
  SUBCASE("preset reference and inline block are mutually exclusive") {
    CHECK_THROWS_AS(
        parse_config_text(tiny_box_text() + "species = rb87_f2\n", "x"),
        ConfigError);
  }
  SUBCASE("inverted q range") {
    std::string text = tiny_box_text();
    const auto pos = text.find("q_min_hz = -70");
    text.replace(pos, 14, "q_min_hz = +10");
    CHECK_THROWS_AS(parse_config_text(text, "x"), ConfigError);
  }
  SUBCASE("axis count must match the dimensionality") {
    std::string text = tiny_box_text();
    const auto pos = text.find("grid_npts = 63");
    text.replace(pos, 14, "grid_npts = 63, 63");
    CHECK_THROWS_AS(parse_config_text(text, "x"), ConfigError);
  }
  SUBCASE("q range and b range are mutually exclusive") {
    CHECK_THROWS_AS(parse_config_text(tiny_box_text() + "b_min_g = 0.1\n", "x"),
                    ConfigError);
  }
}

TEST_CASE("field range converts to a q range through the species coefficient") {
  std::string text = tiny_box_text();
  const auto pos = text.find("q_min_hz = -70\nq_max_hz = 0\n");
  text.replace(pos, std::string("q_min_hz = -70\nq_max_hz = 0\n").size(),
               "b_min_g = 0.5\nb_max_g = 1.0\n");
  auto cfg = parse_config_text(text, "x");
  // qze = -70: B in [0.5, 1] maps to q in [-70, -17.5], reordered increasing
  CHECK(cfg.q_min_hz == doctest::Approx(-70.0).epsilon(1e-12));
  CHECK(cfg.q_max_hz == doctest::Approx(-17.5).epsilon(1e-12));
}

TEST_CASE("species preset search prefers the environment directory") {
  const std::string dir = "/tmp/spinsim_scenario_test/presets";
  ensure_directory(dir);
  {
    std::ofstream f(dir + "/env_only.preset");
    f << "name = env_only\nmass_kg = 1.44e-25\nf = 1\n"
      << "a0_m = 5.0e-9\na2_m = 5.2e-9\n";
  }
  setenv("SPINSIM_PRESETS", dir.c_str(), 1);
  const std::string found = find_species_preset("env_only");
  CHECK(found == dir + "/env_only.preset");
  // shipped presets still resolve
  CHECK(!find_species_preset("rb87_f2").empty());
  unsetenv("SPINSIM_PRESETS");
  CHECK_THROWS_AS(find_species_preset("env_only"), ConfigError);
  CHECK_THROWS_AS(find_species_preset("no_such_species"), ConfigError);
}

TEST_CASE("prepared scenario sweeps end to end") {
  auto cfg = parse_config_text(tiny_box_text(), "inline");
  auto prep = prepare_scenario(cfg);
  CHECK(prep.grid.npts[0] == 63);
  CHECK(prep.basis.count >= 1);
  CHECK(prep.basis.count <= cfg.mode_cap);
  CHECK(prep.coupling_hz.rows() == prep.basis.count);
  // auto cutoff covers the swept window: max|q| + 4 u1 n_pk / h
  const double u1npk = cfg.species.u1_hz_m3() * prep.condensate.peak_density_m3;
  CHECK(prep.cutoff_hz == doctest::Approx(70.0 + 4.0 * u1npk).epsilon(1e-12));

  auto sweep = run_sweep(prep);
  REQUIRE(sweep.q_hz.size() == 36);
  CHECK(sweep.lambda_max_hz > 0.0);
  // flat box profile: the ceiling is u1 n0 / h; the parabolic refinement of
  // the sweep maximum overshoots a circular-arc vertex by O(step^4), so the
  // bound carries that slack
  CHECK(sweep.lambda_max_hz <= u1npk * (1.0 + 1e-6));

  SUBCASE("rerun is deterministic") {
    auto prep2 = prepare_scenario(cfg);
    auto sweep2 = run_sweep(prep2);
    CHECK(sweep_csv(sweep2) == sweep_csv(sweep));
    CHECK(sweep_summary_json(sweep2) == sweep_summary_json(sweep));
  }
}

TEST_CASE("scaling runs need at least two atom numbers") {
  auto cfg = parse_config_text(tiny_box_text(), "inline");
  CHECK_THROWS_AS(run_scaling(cfg, {1e4}), ValidationError);
}

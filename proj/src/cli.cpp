#include "spinsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef SPINSIM_HAVE_OPENMP
#include <omp.h>
#endif

#include "spinsim/bdg.hpp"
#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/io.hpp"
#include "spinsim/kernels.hpp"
#include "spinsim/oracles.hpp"
#include "spinsim/scenario.hpp"

namespace spinsim {

namespace {

constexpr double kRb87MassKg = 1.443160895e-25;

int emit_error(const char* kind, const std::string& message, int code) {
  std::fputs(error_json(kind, message, code).c_str(), stderr);
  return code;
}

void apply_thread_env() {
  const char* env = std::getenv("SPINSIM_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0)
    throw ConfigError("SPINSIM_THREADS must be a nonnegative integer");
  if (v == 1) {
    kernels::set_parallel(false);
    return;
  }
  kernels::set_parallel(true);
#ifdef SPINSIM_HAVE_OPENMP
  if (v > 1) omp_set_num_threads(static_cast<int>(v));
#endif
}

std::string find_scenario_preset(const std::string& ref) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return ref;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("SPINSIM_SCENARIOS")) dirs.emplace_back(env);
  dirs.emplace_back("presets/scenarios");
#ifdef SPINSIM_SOURCE_SCENARIOS
  dirs.emplace_back(SPINSIM_SOURCE_SCENARIOS);
#endif
  for (const auto& d : dirs) {
    const fs::path p = d / (ref + ".scenario");
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  std::ostringstream msg;
  msg << "scenario preset '" << ref << "' not found; searched";
  for (const auto& d : dirs) msg << " " << d.string();
  throw ConfigError(msg.str());
}

std::string join_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"trapped spinor condensate pair-creation instability spectrum"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  double q_min = 0.0, q_max = 0.0, q_at = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::vector<double> atom_numbers;

  auto add_scenario_options = [&](CLI::App* sub, bool with_q_range) {
    auto* grp = sub->add_option_group("scenario", "scenario source");
    grp->add_option("--config", config_path, "scenario file");
    grp->add_option("--preset", preset, "named scenario preset");
    grp->require_option(1);
    sub->add_option("--out", out_dir, "output directory (overrides the scenario)");
    sub->add_option("--seed", seed, "start-vector seed (overrides the scenario)");
    if (with_q_range) {
      sub->add_option("--q-min", q_min, "sweep start, Hz (overrides the scenario)");
      sub->add_option("--q-max", q_max, "sweep end, Hz (overrides the scenario)");
      sub->add_option("--steps", steps, "sweep sample count (overrides the scenario)");
    }
  };

  CLI::App* tf = app.add_subcommand("tf", "stationary condensate only");
  add_scenario_options(tf, false);
  CLI::App* modes = app.add_subcommand("modes", "mode basis energies");
  add_scenario_options(modes, true);
  CLI::App* sweep = app.add_subcommand("sweep", "instability rate over the q range");
  add_scenario_options(sweep, true);
  CLI::App* scaling =
      app.add_subcommand("scaling", "resonance-position power law over atom number");
  add_scenario_options(scaling, true);
  scaling->add_option("--n", atom_numbers, "atom numbers, comma separated")
      ->delimiter(',')
      ->required();
  CLI::App* profile =
      app.add_subcommand("mode-profile", "fastest-growing eigenvector at one q");
  add_scenario_options(profile, false);
  profile->add_option("--q", q_at, "quadratic Zeeman energy, Hz")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "closed-form reference models");
  oracle->require_subcommand(1);
  double o_q = 0.0, o_qcr = 0.0, o_mass = kRb87MassKg;
  double o_width = 0.0, o_density = 0.0, o_u1 = 0.0;
  int o_levels = 64;
  std::string o_species;
  CLI::App* homog =
      oracle->add_subcommand("homogeneous", "uniform condensate closed form");
  homog->add_option("--q", o_q, "quadratic Zeeman energy, Hz")->required();
  homog->add_option("--qcr", o_qcr, "critical q = -U1 n0 / h, Hz")->required();
  homog->add_option("--mass-kg", o_mass, "atom mass (fastest-k output only)");
  CLI::App* boxo = oracle->add_subcommand("box", "hard-wall box level model");
  boxo->add_option("--q", o_q, "quadratic Zeeman energy, Hz")->required();
  boxo->add_option("--width-m", o_width, "box width, m")->required();
  boxo->add_option("--density-m3", o_density, "condensate density, m^-3")->required();
  auto* u1grp = boxo->add_option_group("coupling", "spin interaction strength");
  u1grp->add_option("--u1-hzm3", o_u1, "U1 / h, Hz m^3");
  u1grp->add_option("--species", o_species, "species preset supplying U1");
  u1grp->require_option(1);
  boxo->add_option("--mass-kg", o_mass, "atom mass");
  boxo->add_option("--levels", o_levels, "number of kinetic levels");

  {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("spinsim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);
      return emit_error("usage", e.what(), 2);
    }
  }

  try {
    apply_thread_env();

    auto load_scenario = [&](CLI::App* sub, bool with_q_range) {
      ScenarioConfig cfg = !config_path.empty()
                               ? load_config(config_path)
                               : load_config(find_scenario_preset(preset));
      if (sub->count("--out")) cfg.output_dir = out_dir;
      if (sub->count("--seed")) cfg.seed = seed;
      if (with_q_range) {
        if (sub->count("--q-min")) cfg.q_min_hz = q_min;
        if (sub->count("--q-max")) cfg.q_max_hz = q_max;
        if (sub->count("--steps")) cfg.q_steps = steps;
        if (!(cfg.q_min_hz < cfg.q_max_hz))
          throw ConfigError("q range must satisfy q_min_hz < q_max_hz");
        if (cfg.q_steps < 2) throw ConfigError("steps must be at least 2");
      }
      return cfg;
    };

    if (app.got_subcommand(tf)) {
      const ScenarioConfig cfg = load_scenario(tf, false);
      const TrapGeometry trap = cfg.trap();
      const GridSpec grid =
          trap.kind == TrapGeometry::Kind::harmonic
              ? make_harmonic_grid(trap, cfg.species, cfg.atom_number, cfg.grid_npts,
                                   cfg.grid_margin)
              : GridSpec::box_interior(cfg.dim, cfg.grid_npts, trap.half_width_m);
      const CondensateState st = solve_tf(grid, trap, cfg.species, cfg.atom_number);
      ensure_directory(cfg.output_dir);
      write_text_file(join_path(cfg.output_dir, "scenario_echo.cfg"), echo_config(cfg));
      write_text_file(join_path(cfg.output_dir, "tf_summary.json"),
                      tf_summary_json(st.mu_hz, st.peak_density_m3,
                                      tf_radii_m(st.mu_hz, trap, cfg.species.mass_kg),
                                      cfg.dim, st.atom_number));
      write_text_file(join_path(cfg.output_dir, "density.csv"), field_csv(st.n0));
      write_field_binary(join_path(cfg.output_dir, "density.spnf"), st.n0);
      std::printf("mu_hz = %s\n", format_double(st.mu_hz).c_str());
      std::printf("peak_density_m3 = %s\n", format_double(st.peak_density_m3).c_str());
      std::printf("atom_number = %s\n", format_double(st.atom_number).c_str());
      std::printf("wrote %s\n", cfg.output_dir.c_str());
      return 0;
    }

    if (app.got_subcommand(modes)) {
      const ScenarioConfig cfg = load_scenario(modes, true);
      const PreparedScenario prep = prepare_scenario(cfg);
      ensure_directory(cfg.output_dir);
      write_text_file(join_path(cfg.output_dir, "scenario_echo.cfg"), echo_config(cfg));
      write_text_file(join_path(cfg.output_dir, "energies.csv"),
                      energies_csv(prep.basis.energies_hz));
      std::printf("modes = %d\n", prep.basis.count);
      std::printf("cutoff_hz = %s\n", format_double(prep.cutoff_hz).c_str());
      std::printf("cutoff_covered = %s\n", prep.basis.cutoff_covered ? "true" : "false");
      std::printf("wrote %s\n", cfg.output_dir.c_str());
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      const ScenarioConfig cfg = load_scenario(sweep, true);
      const PreparedScenario prep = prepare_scenario(cfg);
      const SweepResult sw = run_sweep(prep);
      ensure_directory(cfg.output_dir);
      write_text_file(join_path(cfg.output_dir, "scenario_echo.cfg"), echo_config(cfg));
      write_text_file(join_path(cfg.output_dir, "sweep.csv"), sweep_csv(sw));
      write_text_file(join_path(cfg.output_dir, "sweep_summary.json"),
                      sweep_summary_json(sw));
      std::printf("rows = %zu\n", sw.q_hz.size());
      std::printf("lambda_max_hz = %s at q_hz = %s\n",
                  format_double(sw.lambda_max_hz).c_str(),
                  format_double(sw.q_at_max_hz).c_str());
      if (sw.has_q_tilde_cr)
        std::printf("q_tilde_cr_hz = %s\n", format_double(sw.q_tilde_cr_hz).c_str());
      else
        std::printf("q_tilde_cr_hz = none\n");
      std::printf("wrote %s\n", cfg.output_dir.c_str());
      return 0;
    }

    if (app.got_subcommand(scaling)) {
      const ScenarioConfig cfg = load_scenario(scaling, true);
      const ScalingFit fit = run_scaling(cfg, atom_numbers);
      ensure_directory(cfg.output_dir);
      write_text_file(join_path(cfg.output_dir, "scenario_echo.cfg"), echo_config(cfg));
      write_text_file(join_path(cfg.output_dir, "scaling_summary.json"),
                      scaling_summary_json(fit));
      std::printf("gamma = %s\n", format_double(fit.gamma).c_str());
      std::printf("gamma_stderr = %s\n", format_double(fit.gamma_stderr).c_str());
      std::printf("wrote %s\n", cfg.output_dir.c_str());
      return 0;
    }

    if (app.got_subcommand(profile)) {
      const ScenarioConfig cfg = load_scenario(profile, false);
      const PreparedScenario prep = prepare_scenario(cfg);
      const BdgSpectrum spec = bdg_eigen(prep.basis, prep.coupling_hz, q_at);
      const Field density = most_unstable_density(prep.basis, spec.top_coeffs);
      ensure_directory(cfg.output_dir);
      write_text_file(join_path(cfg.output_dir, "scenario_echo.cfg"), echo_config(cfg));
      write_text_file(join_path(cfg.output_dir, "spectrum.csv"), spectrum_csv(spec));
      write_text_file(join_path(cfg.output_dir, "spectrum_summary.json"),
                      spectrum_summary_json(spec));
      write_text_file(join_path(cfg.output_dir, "profile.csv"), field_csv(density));
      write_field_binary(join_path(cfg.output_dir, "profile.spnf"), density);
      std::printf("q_hz = %s\n", format_double(q_at).c_str());
      std::printf("lambda_hz = %s\n", format_double(spec.lambda_hz).c_str());
      std::printf("unstable_count = %d\n", spec.unstable_count);
      std::printf("wrote %s\n", cfg.output_dir.c_str());
      return 0;
    }

    if (oracle->got_subcommand(homog)) {
      const HomogeneousResult r = homogeneous_rate_qcr(o_q, o_qcr, o_mass);
      const char* regime = r.regime == HomogeneousRegime::stable ? "stable"
                           : r.regime == HomogeneousRegime::unstable_zero_k
                               ? "unstable_zero_k"
                               : "unstable_finite_k";
      std::printf("regime = %s\n", regime);
      std::printf("lambda_hz = %s\n", format_double(r.rate_hz).c_str());
      std::printf("q_cr_hz = %s\n", format_double(r.q_cr_hz).c_str());
      std::printf("k_max_inv_m = %s\n", format_double(r.k_max_inv_m).c_str());
      return 0;
    }

    if (oracle->got_subcommand(boxo)) {
      double u1 = o_u1;
      double mass = o_mass;
      if (!o_species.empty()) {
        const SpeciesParams sp = load_species_preset(find_species_preset(o_species));
        u1 = sp.u1_hz_m3();
        if (!boxo->count("--mass-kg")) mass = sp.mass_kg;
      }
      if (o_levels < 1) throw ConfigError("levels must be at least 1");
      const std::vector<double> levels = box_levels_1d_hz(o_width, mass, o_levels);
      const BoxModelResult r = box_rate(o_q, u1, o_density, levels);
      std::printf("lambda_hz = %s\n", format_double(r.rate_hz).c_str());
      std::printf("level = %d\n", r.level);
      std::printf("eps_hz = %s\n",
                  format_double(r.per_level[static_cast<std::size_t>(r.level)].eps_hz)
                      .c_str());
      std::printf("resonant = %s\n", r.resonant ? "true" : "false");
      std::printf("eta_hz = %s\n",
                  format_double(box_detuning_hz(o_q, u1, o_density)).c_str());
      return 0;
    }

    return emit_error("usage", "no subcommand selected", 2);
  } catch (const ConfigError& e) {
    return emit_error("config", e.what(), 3);
  } catch (const ValidationError& e) {
    return emit_error("validation", e.what(), 3);
  } catch (const DomainError& e) {
    return emit_error("domain", e.what(), 3);
  } catch (const ResolutionError& e) {
    return emit_error("resolution", e.what(), 3);
  } catch (const SolverError& e) {
    return emit_error("solver", e.what(), 4);
  } catch (const NumericError& e) {
    return emit_error("numeric", e.what(), 4);
  } catch (const std::exception& e) {
    return emit_error("internal", e.what(), 4);
  }
}

} // namespace spinsim

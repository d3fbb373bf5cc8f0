#include "spinsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spinsim/errors.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/io.hpp"
#include "keyval.hpp"

namespace spinsim {

namespace {

const std::set<std::string> kKnownKeys = {
    "species",        "species_name",  "species_mass_kg",
    "species_f",      "species_a0_m",  "species_a2_m",
    "species_a4_m",   "species_qze_hz_per_gauss2",
    "trap",           "dim",           "trap_freqs_hz",
    "box_half_widths_m", "atom_number", "grid_npts",
    "grid_margin",    "resolution_relax", "mode_cap",
    "energy_cutoff_hz", "q_min_hz",    "q_max_hz",
    "b_min_g",        "b_max_g",       "q_steps",
    "seed",           "output_dir"};

SpeciesParams species_from_doc(const keyval::Document& doc, std::string& ref_out) {
  const bool has_ref = doc.has("species");
  bool has_inline = false;
  for (const auto& e : doc.entries)
    if (e.key.rfind("species_", 0) == 0) has_inline = true;

  if (has_ref && has_inline)
    doc.fail("species",
             "cannot be combined with inline species_* parameters; pick one");
  if (!has_ref && !has_inline)
    throw ConfigError(doc.origin +
                      ": missing species (preset name or inline species_* block)");

  if (has_ref) {
    ref_out = keyval::get_string(doc, "species");
    return load_species_preset(find_species_preset(ref_out));
  }

  ref_out.clear();
  const std::string name = keyval::get_string(doc, "species_name");
  const double mass = keyval::get_double(doc, "species_mass_kg");
  const int f = static_cast<int>(keyval::get_int(doc, "species_f"));
  std::map<int, double> lengths;
  lengths[0] = keyval::get_double(doc, "species_a0_m");
  lengths[2] = keyval::get_double(doc, "species_a2_m");
  if (doc.has("species_a4_m")) lengths[4] = keyval::get_double(doc, "species_a4_m");
  std::optional<double> qze;
  if (doc.has("species_qze_hz_per_gauss2"))
    qze = keyval::get_double(doc, "species_qze_hz_per_gauss2");
  return build_species(name, mass, f, lengths, qze);
}

std::array<double, 3> axis_values(const keyval::Document& doc, const std::string& key,
                                  int dim, const char* positive_what) {
  const std::vector<double> v = keyval::get_doubles(doc, key, dim);
  std::array<double, 3> out = {0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    if (!(v[static_cast<std::size_t>(a)] > 0.0)) doc.fail(key, positive_what);
    out[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)];
  }
  return out;
}

ScenarioConfig from_document(const keyval::Document& doc) {
  for (const auto& e : doc.entries)
    if (kKnownKeys.count(e.key) == 0)
      throw ConfigError(doc.origin + ":" + std::to_string(e.line) +
                        ": unknown field '" + e.key + "'");

  ScenarioConfig cfg;
  cfg.species = species_from_doc(doc, cfg.species_ref);

  const std::string trap = keyval::get_string(doc, "trap");
  cfg.dim = static_cast<int>(keyval::get_int(doc, "dim"));
  if (cfg.dim < 1 || cfg.dim > 3) doc.fail("dim", "must be 1, 2 or 3");
  if (trap == "harmonic") {
    cfg.trap_kind = TrapGeometry::Kind::harmonic;
    if (doc.has("box_half_widths_m"))
      doc.fail("box_half_widths_m", "does not apply to a harmonic trap");
    cfg.trap_freqs_hz =
        axis_values(doc, "trap_freqs_hz", cfg.dim, "entries must be positive (Hz)");
  } else if (trap == "box") {
    cfg.trap_kind = TrapGeometry::Kind::box;
    if (doc.has("trap_freqs_hz"))
      doc.fail("trap_freqs_hz", "does not apply to a box trap");
    cfg.box_half_widths_m =
        axis_values(doc, "box_half_widths_m", cfg.dim, "entries must be positive (m)");
  } else {
    doc.fail("trap", "must be 'harmonic' or 'box'");
  }

  cfg.atom_number = keyval::get_double(doc, "atom_number");
  if (!(cfg.atom_number > 0.0)) doc.fail("atom_number", "must be positive");

  const std::vector<long long> npts = keyval::get_ints(doc, "grid_npts", cfg.dim);
  cfg.grid_npts = {1, 1, 1};
  for (int a = 0; a < cfg.dim; ++a) {
    if (npts[static_cast<std::size_t>(a)] < 2)
      doc.fail("grid_npts", "needs at least 2 points per active axis");
    if (npts[static_cast<std::size_t>(a)] > 4096)
      doc.fail("grid_npts", "exceeds the 4096 points-per-axis limit");
    cfg.grid_npts[static_cast<std::size_t>(a)] =
        static_cast<int>(npts[static_cast<std::size_t>(a)]);
  }

  cfg.grid_margin = keyval::get_double_or(doc, "grid_margin", 1.3);
  if (!(cfg.grid_margin > 0.0)) doc.fail("grid_margin", "must be positive");
  cfg.resolution_relax = keyval::get_double_or(doc, "resolution_relax", 1.0);
  if (!(cfg.resolution_relax > 0.0)) doc.fail("resolution_relax", "must be positive");
  cfg.mode_cap = static_cast<int>(keyval::get_int_or(doc, "mode_cap", 400));
  if (cfg.mode_cap < 1) doc.fail("mode_cap", "must be at least 1");

  if (doc.has("energy_cutoff_hz") &&
      keyval::get_string(doc, "energy_cutoff_hz") != "auto") {
    cfg.cutoff_auto = false;
    cfg.energy_cutoff_hz = keyval::get_double(doc, "energy_cutoff_hz");
  } else {
    cfg.cutoff_auto = true;
    cfg.energy_cutoff_hz = 0.0;
  }

  const bool has_q = doc.has("q_min_hz") || doc.has("q_max_hz");
  const bool has_b = doc.has("b_min_g") || doc.has("b_max_g");
  if (has_q && has_b)
    throw ConfigError(doc.origin +
                      ": give either a q range (q_min_hz/q_max_hz) or a field range "
                      "(b_min_g/b_max_g), not both");
  if (has_q) {
    cfg.q_min_hz = keyval::get_double(doc, "q_min_hz");
    cfg.q_max_hz = keyval::get_double(doc, "q_max_hz");
  } else if (has_b) {
    const double b0 = keyval::get_double(doc, "b_min_g");
    const double b1 = keyval::get_double(doc, "b_max_g");
    double q0, q1;
    try {
      q0 = b_to_q(b0, cfg.species);
      q1 = b_to_q(b1, cfg.species);
    } catch (const ConfigError& e) {
      doc.fail("b_min_g", std::string("cannot be converted: ") + e.what());
    }
    cfg.q_min_hz = std::min(q0, q1);
    cfg.q_max_hz = std::max(q0, q1);
  } else {
    throw ConfigError(doc.origin + ": missing q range (q_min_hz/q_max_hz)");
  }
  if (!(cfg.q_min_hz < cfg.q_max_hz))
    doc.fail(has_b ? "b_min_g" : "q_min_hz",
             "must produce a q range with q_min_hz < q_max_hz");

  cfg.q_steps = static_cast<int>(keyval::get_int_or(doc, "q_steps", 121));
  if (cfg.q_steps < 2) doc.fail("q_steps", "must be at least 2");
  cfg.seed = keyval::get_uint_or(doc, "seed", 0x5350494e53494dULL);
  cfg.output_dir = keyval::get_string_or(doc, "output_dir", "out");
  if (cfg.output_dir.empty()) doc.fail("output_dir", "must not be empty");
  return cfg;
}

void append_axes(std::ostream& os, const std::array<double, 3>& v, int dim) {
  for (int a = 0; a < dim; ++a) {
    if (a) os << ",";
    os << format_double(v[static_cast<std::size_t>(a)]);
  }
}

} // namespace

TrapGeometry ScenarioConfig::trap() const {
  if (trap_kind == TrapGeometry::Kind::harmonic)
    return TrapGeometry::harmonic(dim, trap_freqs_hz);
  return TrapGeometry::box(dim, box_half_widths_m);
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.species == b.species && a.trap_kind == b.trap_kind && a.dim == b.dim &&
         a.trap_freqs_hz == b.trap_freqs_hz &&
         a.box_half_widths_m == b.box_half_widths_m &&
         a.atom_number == b.atom_number && a.grid_npts == b.grid_npts &&
         a.grid_margin == b.grid_margin &&
         a.resolution_relax == b.resolution_relax && a.mode_cap == b.mode_cap &&
         a.cutoff_auto == b.cutoff_auto &&
         a.energy_cutoff_hz == b.energy_cutoff_hz && a.q_min_hz == b.q_min_hz &&
         a.q_max_hz == b.q_max_hz && a.q_steps == b.q_steps && a.seed == b.seed &&
         a.output_dir == b.output_dir;
}

ScenarioConfig load_config(const std::string& path) {
  return from_document(keyval::parse_file(path));
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  return from_document(keyval::parse(text, origin));
}

std::string echo_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  // No provenance lines here: the echo must be a byte-stable fixed point of
  // parse -> echo, and preset references do not survive the round trip.
  os << "# scenario echo: fully resolved, reloadable\n";
  os << "species_name = " << cfg.species.name << "\n";
  os << "species_mass_kg = " << format_double(cfg.species.mass_kg) << "\n";
  os << "species_f = " << cfg.species.hyperfine_f << "\n";
  for (const auto& [channel, a_m] : cfg.species.scattering_lengths_m)
    os << "species_a" << channel << "_m = " << format_double(a_m) << "\n";
  if (cfg.species.qze_hz_per_gauss2)
    os << "species_qze_hz_per_gauss2 = "
       << format_double(*cfg.species.qze_hz_per_gauss2) << "\n";

  const bool harmonic = cfg.trap_kind == TrapGeometry::Kind::harmonic;
  os << "trap = " << (harmonic ? "harmonic" : "box") << "\n";
  os << "dim = " << cfg.dim << "\n";
  if (harmonic) {
    os << "trap_freqs_hz = ";
    append_axes(os, cfg.trap_freqs_hz, cfg.dim);
    os << "\n";
  } else {
    os << "box_half_widths_m = ";
    append_axes(os, cfg.box_half_widths_m, cfg.dim);
    os << "\n";
  }

  os << "atom_number = " << format_double(cfg.atom_number) << "\n";
  os << "grid_npts = ";
  for (int a = 0; a < cfg.dim; ++a) {
    if (a) os << ",";
    os << cfg.grid_npts[static_cast<std::size_t>(a)];
  }
  os << "\n";
  os << "grid_margin = " << format_double(cfg.grid_margin) << "\n";
  os << "resolution_relax = " << format_double(cfg.resolution_relax) << "\n";
  os << "mode_cap = " << cfg.mode_cap << "\n";
  if (cfg.cutoff_auto)
    os << "energy_cutoff_hz = auto\n";
  else
    os << "energy_cutoff_hz = " << format_double(cfg.energy_cutoff_hz) << "\n";
  os << "q_min_hz = " << format_double(cfg.q_min_hz) << "\n";
  os << "q_max_hz = " << format_double(cfg.q_max_hz) << "\n";
  os << "q_steps = " << cfg.q_steps << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  return os.str();
}

std::string find_species_preset(const std::string& ref) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return ref;

  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("SPINSIM_PRESETS")) dirs.emplace_back(env);
  dirs.emplace_back("presets/species");
#ifdef SPINSIM_SOURCE_PRESETS
  dirs.emplace_back(SPINSIM_SOURCE_PRESETS);
#endif
  for (const auto& d : dirs) {
    const fs::path p = d / (ref + ".preset");
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  std::ostringstream msg;
  msg << "species preset '" << ref << "' not found; searched";
  for (const auto& d : dirs) msg << " " << d.string();
  throw ConfigError(msg.str());
}

PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
  PreparedScenario prep;
  prep.config = cfg;
  const TrapGeometry trap = cfg.trap();

  if (trap.kind == TrapGeometry::Kind::harmonic) {
    prep.grid = make_harmonic_grid(trap, cfg.species, cfg.atom_number, cfg.grid_npts,
                                   cfg.grid_margin);
  } else {
    prep.grid = GridSpec::box_interior(cfg.dim, cfg.grid_npts, trap.half_width_m);
  }

  prep.condensate = solve_tf(prep.grid, trap, cfg.species, cfg.atom_number);
  prep.fields = effective_fields(prep.condensate, trap, cfg.species);

  prep.cutoff_hz = cfg.cutoff_auto
                       ? std::max(std::abs(cfg.q_min_hz), std::abs(cfg.q_max_hz)) +
                             4.0 * std::abs(cfg.species.u1_hz_m3()) *
                                 prep.condensate.peak_density_m3
                       : cfg.energy_cutoff_hz;

  const StencilHam ham = discretize_heff(prep.fields, cfg.species, cfg.resolution_relax);
  LanczosOptions opts;
  opts.m_cap = cfg.mode_cap;
  opts.cutoff_hz = prep.cutoff_hz;
  opts.seed = cfg.seed;
  prep.basis = solve_lowest_modes(ham, opts);
  prep.coupling_hz = coupling_matrix(prep.basis, prep.fields);
  return prep;
}

SweepResult run_sweep(const PreparedScenario& prep) {
  const ScenarioConfig& cfg = prep.config;
  return sweep_lambda(prep.basis, prep.coupling_hz,
                      linspace(cfg.q_min_hz, cfg.q_max_hz, cfg.q_steps));
}

ScalingFit run_scaling(const ScenarioConfig& base,
                       const std::vector<double>& atom_numbers) {
  if (atom_numbers.size() < 2)
    throw ValidationError("scaling needs at least two atom numbers");

  std::vector<double> q_res;
  std::ostringstream failures;
  bool failed = false;
  for (double n : atom_numbers) {
    ScenarioConfig cfg = base;
    cfg.atom_number = n;
    try {
      const PreparedScenario prep = prepare_scenario(cfg);
      const SweepResult sweep = run_sweep(prep);
      if (sweep.maxima.empty())
        throw SolverError("sweep resolved no resonance maximum");
      const Resonance* best = &sweep.maxima.front();
      for (const Resonance& r : sweep.maxima)
        if (std::abs(r.q_hz) < std::abs(best->q_hz)) best = &r;
      q_res.push_back(std::abs(best->q_hz));
    } catch (const std::exception& e) {
      if (failed) failures << "; ";
      failures << "N = " << format_double(n) << ": " << e.what();
      failed = true;
    }
  }
  if (failed)
    throw SolverError("scaling run failed for " + failures.str());
  return scaling_fit(atom_numbers, q_res);
}

} // namespace spinsim

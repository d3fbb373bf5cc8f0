#ifndef SPINSIM_SCENARIO_HPP
#define SPINSIM_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "spinsim/bdg.hpp"
#include "spinsim/lanczos.hpp"
#include "spinsim/species.hpp"
#include "spinsim/sweep.hpp"
#include "spinsim/tf.hpp"
#include "spinsim/trap.hpp"

namespace spinsim {

/// Fully resolved simulation scenario. Loaded from flat key = value text
/// where every physical key carries a unit suffix (_hz, _g, _m, _s);
/// see docs in README. A magnetic-field range (b_min_g/b_max_g) is converted
/// to q at load time via the species coefficient and not retained, so the
/// echoed file always speaks q.
struct ScenarioConfig {
  std::string species_ref; // as written in the file; empty when given inline.
                           // Provenance only: excluded from equality.
  SpeciesParams species;   // resolved parameters

  // Trap inputs exactly as parsed (no unit conversion applied), so the echo
  // round-trips bit-for-bit. Inactive axes are zero.
  TrapGeometry::Kind trap_kind = TrapGeometry::Kind::harmonic;
  int dim = 3;
  std::array<double, 3> trap_freqs_hz = {0.0, 0.0, 0.0};
  std::array<double, 3> box_half_widths_m = {0.0, 0.0, 0.0};
  TrapGeometry trap() const;

  double atom_number = 0.0;
  std::array<int, 3> grid_npts = {1, 1, 1};
  double grid_margin = 1.3;      // harmonic traps: extent = margin * TF radius
  double resolution_relax = 1.0; // spacing <= relax * healing_length / 2
  int mode_cap = 400;
  bool cutoff_auto = true;       // cutoff = max|q| + 4 U1 n_pk / h
  double energy_cutoff_hz = 0.0; // used when !cutoff_auto
  double q_min_hz = 0.0;
  double q_max_hz = 0.0;
  int q_steps = 121;
  std::uint64_t seed = 0x5350494e53494dULL;
  std::string output_dir = "out";
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);
inline bool operator!=(const ScenarioConfig& a, const ScenarioConfig& b) {
  return !(a == b);
}

/// Parses and validates a scenario file. Defaults applied, units checked,
/// species preset resolved (search order: SPINSIM_PRESETS env dir,
/// ./presets/species, the build-time source presets dir). Parse and
/// validation errors cite file, line and field.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical fully-resolved serialization. Self-contained: the species block
/// is inlined, so the echo reproduces the run with no external preset
/// lookup. load(echo(c)) == c.
std::string echo_config(const ScenarioConfig& cfg);

/// Locates a species preset by name or path; throws ConfigError when absent.
std::string find_species_preset(const std::string& ref);

/// Pipeline state shared by every q of a sweep: condensate, effective
/// fields, mode basis, coupling matrix.
struct PreparedScenario {
  ScenarioConfig config;
  GridSpec grid;
  CondensateState condensate;
  EffectiveFields fields;
  ModeBasis basis;
  Eigen::MatrixXd coupling_hz;
  double cutoff_hz = 0.0; // resolved (auto or explicit)
};

PreparedScenario prepare_scenario(const ScenarioConfig& cfg);

/// Full sweep over the config's q grid. Fits the effective critical q on
/// the lobe adjacent to q = 0 when the sweep covers unstable q <= 0 samples;
/// absence of such a lobe leaves has_q_tilde_cr false.
SweepResult run_sweep(const PreparedScenario& prep);

/// Per-N pipeline: |q| of the resonance nearest q = 0 for each atom number,
/// then the log-log power-law fit. Throws SolverError listing the atom
/// numbers whose sweep produced no resonance.
ScalingFit run_scaling(const ScenarioConfig& base, const std::vector<double>& atom_numbers);

} // namespace spinsim

#endif

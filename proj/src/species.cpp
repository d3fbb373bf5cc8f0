#include "spinsim/species.hpp"

#include <cmath>
#include <numbers>

#include "spinsim/errors.hpp"
#include "keyval.hpp"

namespace spinsim {

namespace {

double g_of(double a_m, double mass_kg) {
  using namespace constants;
  return 4.0 * std::numbers::pi * HBAR * HBAR * a_m / mass_kg;
}

} // namespace

SpeciesParams build_species(const std::string& name, double mass_kg, int hyperfine_f,
                            const std::map<int, double>& scattering_lengths_m,
                            std::optional<double> qze_hz_per_gauss2) {
  if (!(mass_kg > 0.0)) throw ValidationError("species '" + name + "': mass must be positive");
  if (hyperfine_f != 1 && hyperfine_f != 2)
    throw ConfigError("species '" + name + "': hyperfine manifold must be F=1 or F=2");

  const std::map<int, double>& a = scattering_lengths_m;
  const bool channels_ok =
      (hyperfine_f == 1) ? (a.size() == 2 && a.count(0) && a.count(2))
                         : (a.size() == 3 && a.count(0) && a.count(2) && a.count(4));
  if (!channels_ok)
    throw ConfigError("species '" + name + "': F=" + std::to_string(hyperfine_f) +
                      (hyperfine_f == 1 ? " needs scattering channels {0,2}"
                                        : " needs scattering channels {0,2,4}"));
  for (const auto& [chan, len] : a)
    if (!(len > 0.0))
      throw ValidationError("species '" + name + "': scattering length a" +
                            std::to_string(chan) + " must be positive");

  SpeciesParams sp;
  sp.name = name;
  sp.mass_kg = mass_kg;
  sp.hyperfine_f = hyperfine_f;
  sp.scattering_lengths_m = a;
  sp.qze_hz_per_gauss2 = qze_hz_per_gauss2;

  if (hyperfine_f == 1) {
    const double g0 = g_of(a.at(0), mass_kg), g2 = g_of(a.at(2), mass_kg);
    sp.u0 = (g0 + 2.0 * g2) / 3.0;
    sp.u1 = (g2 - g0) / 3.0;
  } else {
    const double g0 = g_of(a.at(0), mass_kg), g2 = g_of(a.at(2), mass_kg),
                 g4 = g_of(a.at(4), mass_kg);
    sp.u0 = (7.0 * g0 + 10.0 * g2 + 18.0 * g4) / 35.0;
    sp.u1 = (-7.0 * g0 - 5.0 * g2 + 12.0 * g4) / 35.0;
  }

  if (!(sp.u0 > 0.0))
    throw ValidationError("species '" + name + "': density channel U0 must be repulsive");
  return sp;
}

bool operator==(const SpeciesParams& a, const SpeciesParams& b) {
  return a.name == b.name && a.mass_kg == b.mass_kg && a.hyperfine_f == b.hyperfine_f &&
         a.scattering_lengths_m == b.scattering_lengths_m && a.u0 == b.u0 &&
         a.u1 == b.u1 && a.qze_hz_per_gauss2 == b.qze_hz_per_gauss2;
}

double b_to_q(double b_gauss, const SpeciesParams& species) {
  if (!species.qze_hz_per_gauss2)
    throw ConfigError("species '" + species.name +
                      "': no quadratic Zeeman coefficient configured");
  return *species.qze_hz_per_gauss2 * b_gauss * b_gauss;
}

SpeciesParams load_species_preset(const std::string& path) {
  const keyval::Document doc = keyval::parse_file(path);
  const std::string name = keyval::get_string(doc, "name");
  const double mass = keyval::get_double(doc, "mass_kg");
  const int f = static_cast<int>(keyval::get_int(doc, "f"));

  std::map<int, double> lengths;
  lengths[0] = keyval::get_double(doc, "a0_m");
  lengths[2] = keyval::get_double(doc, "a2_m");
  if (f == 2) lengths[4] = keyval::get_double(doc, "a4_m");
  else if (doc.has("a4_m")) doc.fail("a4_m", "is only valid for F=2 presets");

  std::optional<double> qze;
  if (doc.has("qze_hz_per_gauss2")) qze = keyval::get_double(doc, "qze_hz_per_gauss2");

  for (const auto& e : doc.entries) {
    static const char* known[] = {"name", "mass_kg", "f", "a0_m", "a2_m", "a4_m",
                                  "qze_hz_per_gauss2"};
    bool ok = false;
    for (const char* k : known) ok = ok || e.key == k;
    if (!ok) doc.fail(e.key, "is not a species preset field");
  }

  return build_species(name, mass, f, lengths, qze);
}

} // namespace spinsim

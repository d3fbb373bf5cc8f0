#ifndef SPINSIM_IO_HPP
#define SPINSIM_IO_HPP

#include <string>
#include <vector>

#include "spinsim/bdg.hpp"
#include "spinsim/grid.hpp"
#include "spinsim/sweep.hpp"
#include "spinsim/tf.hpp"

namespace spinsim {

/// All text output is written with 17 significant digits so reruns compare
/// bitwise and values round-trip exactly through parsing. Every CSV starts
/// with "# schema=<name>.v1" followed by the column header line.

std::string format_double(double v); // %.17g

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string sweep_csv(const SweepResult& sweep);                 // q_hz,lambda_hz
std::string spectrum_csv(const BdgSpectrum& spec);               // q_hz,re_xi_hz,im_xi_hz
std::string field_csv(const Field& f);                           // index,x_m,y_m,z_m,value
std::string energies_csv(const std::vector<double>& eps_hz);     // index,eps_hz

std::string sweep_summary_json(const SweepResult& sweep);
std::string spectrum_summary_json(const BdgSpectrum& spec);
std::string scaling_summary_json(const ScalingFit& fit);
std::string tf_summary_json(double mu_hz, double peak_density_m3,
                            const std::array<double, 3>& tf_radii_m, int dim,
                            double atom_number);

/// Machine-readable error envelope written to stderr by the CLI.
std::string error_json(const std::string& kind, const std::string& message,
                       int exit_code);

/// Binary field format, little-endian throughout:
///   magic "SPNF", u32 version (1), u32 dim, u32 npts[3],
///   f64 spacing_m[3], f64 origin_m[3], f64 payload[npts product].
void write_field_binary(const std::string& path, const Field& f);
Field read_field_binary(const std::string& path);

void ensure_directory(const std::string& path);

} // namespace spinsim

#endif

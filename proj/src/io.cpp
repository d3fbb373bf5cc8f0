#include "spinsim/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

using nlohmann::json;

// JSON numbers go through the same 17-digit formatting as CSV so both
// surfaces are bitwise reproducible; nlohmann's default double printer is
// shortest-round-trip, which differs across versions.
json jnum(double v) { return json(format_double(v)); }

json jnum_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i)
    buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t take_u32(const std::string& buf, std::size_t& pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
  return v;
}

double take_f64(const std::string& buf, std::size_t& pos) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "# schema=sweep.v1\n";
  os << "q_hz,lambda_hz\n";
  for (std::size_t i = 0; i < sweep.q_hz.size(); ++i)
    os << format_double(sweep.q_hz[i]) << "," << format_double(sweep.lambda_hz[i])
       << "\n";
  return os.str();
}

std::string spectrum_csv(const BdgSpectrum& spec) {
  std::ostringstream os;
  os << "# schema=spectrum.v1\n";
  os << "q_hz,re_xi_hz,im_xi_hz\n";
  for (const auto& xi : spec.xi_hz)
    os << format_double(spec.q_hz) << "," << format_double(xi.real()) << ","
       << format_double(xi.imag()) << "\n";
  return os.str();
}

std::string field_csv(const Field& f) {
  std::ostringstream os;
  os << "# schema=field.v1\n";
  os << "index,x_m,y_m,z_m,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto p = f.grid.point(i);
    os << i << "," << format_double(p[0]) << "," << format_double(p[1]) << ","
       << format_double(p[2]) << "," << format_double(f[i]) << "\n";
  }
  return os.str();
}

std::string energies_csv(const std::vector<double>& eps_hz) {
  std::ostringstream os;
  os << "# schema=energies.v1\n";
  os << "index,eps_hz\n";
  for (std::size_t i = 0; i < eps_hz.size(); ++i)
    os << i << "," << format_double(eps_hz[i]) << "\n";
  return os.str();
}

std::string sweep_summary_json(const SweepResult& sweep) {
  json j;
  j["schema"] = "sweep_summary.v1";
  j["q_hz"] = jnum_list(sweep.q_hz);
  j["lambda_hz"] = jnum_list(sweep.lambda_hz);
  j["unstable_count"] = sweep.unstable_count;
  json maxima = json::array();
  for (const auto& r : sweep.maxima)
    maxima.push_back({{"q_hz", jnum(r.q_hz)}, {"lambda_hz", jnum(r.lambda_hz)}});
  j["maxima"] = maxima;
  json minima = json::array();
  for (const auto& r : sweep.minima)
    minima.push_back({{"q_hz", jnum(r.q_hz)}, {"lambda_hz", jnum(r.lambda_hz)}});
  j["minima"] = minima;
  j["lambda_max_hz"] = jnum(sweep.lambda_max_hz);
  j["q_at_max_hz"] = jnum(sweep.q_at_max_hz);
  if (sweep.has_q_tilde_cr)
    j["q_tilde_cr_hz"] = jnum(sweep.q_tilde_cr_hz);
  else
    j["q_tilde_cr_hz"] = nullptr;
  return j.dump(2) + "\n";
}

std::string spectrum_summary_json(const BdgSpectrum& spec) {
  json j;
  j["schema"] = "spectrum_summary.v1";
  j["q_hz"] = jnum(spec.q_hz);
  j["lambda_hz"] = jnum(spec.lambda_hz);
  j["unstable_count"] = spec.unstable_count;
  return j.dump(2) + "\n";
}

std::string scaling_summary_json(const ScalingFit& fit) {
  json j;
  j["schema"] = "scaling_summary.v1";
  j["atom_numbers"] = jnum_list(fit.atom_numbers);
  j["q_res_hz"] = jnum_list(fit.q_res_hz);
  j["gamma"] = jnum(fit.gamma);
  j["gamma_stderr"] = jnum(fit.gamma_stderr);
  j["log_prefactor"] = jnum(fit.log_prefactor);
  j["residuals"] = jnum_list(fit.residuals);
  return j.dump(2) + "\n";
}

std::string tf_summary_json(double mu_hz, double peak_density_m3,
                            const std::array<double, 3>& tf_radii_m, int dim,
                            double atom_number) {
  json j;
  j["schema"] = "tf_summary.v1";
  j["mu_hz"] = jnum(mu_hz);
  j["peak_density_m3"] = jnum(peak_density_m3);
  json radii = json::array();
  for (int a = 0; a < dim; ++a) radii.push_back(jnum(tf_radii_m[static_cast<std::size_t>(a)]));
  j["tf_radii_m"] = radii;
  j["dim"] = dim;
  j["atom_number"] = jnum(atom_number);
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& kind, const std::string& message,
                       int exit_code) {
  json j;
  j["schema"] = "error.v1";
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j.dump(2) + "\n";
}

void write_field_binary(const std::string& path, const Field& f) {
  std::string buf;
  buf.reserve(4 + 4 + 4 + 12 + 24 + 24 + 8 * f.size());
  buf += "SPNF";
  put_u32(buf, 1);
  put_u32(buf, static_cast<std::uint32_t>(f.grid.dim));
  for (int a = 0; a < 3; ++a) put_u32(buf, static_cast<std::uint32_t>(f.grid.npts[static_cast<std::size_t>(a)]));
  for (int a = 0; a < 3; ++a) put_f64(buf, f.grid.spacing_m[static_cast<std::size_t>(a)]);
  for (int a = 0; a < 3; ++a) put_f64(buf, f.grid.origin_m[static_cast<std::size_t>(a)]);
  for (double v : f.values) put_f64(buf, v);
  write_text_file(path, buf);
}

Field read_field_binary(const std::string& path) {
  const std::string buf = read_text_file(path);
  if (buf.size() < 4 + 4 + 4 + 12 + 24 + 24 || buf.compare(0, 4, "SPNF") != 0)
    throw ConfigError("'" + path + "' is not a field file (bad magic)");
  std::size_t pos = 4;
  const std::uint32_t version = take_u32(buf, pos);
  if (version != 1)
    throw ConfigError("'" + path + "': unsupported field file version " +
                      std::to_string(version));
  Field f;
  f.grid.dim = static_cast<int>(take_u32(buf, pos));
  if (f.grid.dim < 1 || f.grid.dim > 3)
    throw ConfigError("'" + path + "': invalid dimensionality");
  for (int a = 0; a < 3; ++a) {
    f.grid.npts[static_cast<std::size_t>(a)] = static_cast<int>(take_u32(buf, pos));
    if (f.grid.npts[static_cast<std::size_t>(a)] < 1)
      throw ConfigError("'" + path + "': invalid grid shape");
  }
  for (int a = 0; a < 3; ++a) f.grid.spacing_m[static_cast<std::size_t>(a)] = take_f64(buf, pos);
  for (int a = 0; a < 3; ++a) f.grid.origin_m[static_cast<std::size_t>(a)] = take_f64(buf, pos);
  const std::size_t n = f.grid.size();
  if (buf.size() != pos + 8 * n)
    throw ConfigError("'" + path + "': payload size does not match the grid");
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = take_f64(buf, pos);
  return f;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw ConfigError("cannot create directory '" + path + "': " + ec.message());
}

} // namespace spinsim

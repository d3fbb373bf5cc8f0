#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spinsim/errors.hpp"
#include "spinsim/io.hpp"

using namespace spinsim;

namespace {

Field ramp_field() {
  GridSpec g = GridSpec::centered(2, {5, 3, 1}, {2e-6, 1e-6, 0});
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = -3.5 + 0.7 * static_cast<double>(i) + 1e-17 * static_cast<double>(i);
  return f;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

} // namespace

TEST_CASE("doubles round-trip through the text form") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 3000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_double(0.0).c_str(), nullptr) == 0.0);
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv emitters carry versioned schemas") {
  SweepResult sweep;
  sweep.q_hz = {-2.0, -1.0, 0.0};
  sweep.lambda_hz = {0.5, 0.25, 0.0};
  sweep.unstable_count = {1, 1, 0};
  const std::string csv = sweep_csv(sweep);
  CHECK(csv.rfind("# schema=sweep.v1\nq_hz,lambda_hz\n", 0) == 0);
  CHECK(count_lines(csv) == 5);
  CHECK(csv.find(format_double(-2.0) + "," + format_double(0.5)) != std::string::npos);

  BdgSpectrum spec;
  spec.q_hz = -4.0;
  spec.xi_hz = {{1.5, 0.0}, {-1.5, 0.0}};
  const std::string scsv = spectrum_csv(spec);
  CHECK(scsv.rfind("# schema=spectrum.v1\nq_hz,re_xi_hz,im_xi_hz\n", 0) == 0);
  CHECK(count_lines(scsv) == 4);

  const std::string ecsv = energies_csv({1.0, 2.5});
  CHECK(ecsv.rfind("# schema=energies.v1\nindex,eps_hz\n", 0) == 0);
  CHECK(ecsv.find("1," + format_double(2.5)) != std::string::npos);

  auto f = ramp_field();
  const std::string fcsv = field_csv(f);
  CHECK(fcsv.rfind("# schema=field.v1\nindex,x_m,y_m,z_m,value\n", 0) == 0);
  CHECK(count_lines(fcsv) == 2 + static_cast<int>(f.size()));
}

TEST_CASE("json summaries quote every floating-point number") {
  SweepResult sweep;
  sweep.q_hz = {-2.0, -1.0};
  sweep.lambda_hz = {0.125, 0.25};
  sweep.unstable_count = {1, 2};
  sweep.maxima = {{-1.5, 0.3}};
  sweep.lambda_max_hz = 0.25;
  sweep.q_at_max_hz = -1.0;
  sweep.has_q_tilde_cr = true;
  sweep.q_tilde_cr_hz = -0.75;

  auto j = nlohmann::json::parse(sweep_summary_json(sweep));
  CHECK(j["schema"] == "sweep_summary.v1");
  REQUIRE(j["lambda_hz"].is_array());
  REQUIRE(j["lambda_hz"][0].is_string()); // numbers as strings: exact round-trip
  CHECK(std::strtod(j["lambda_hz"][0].get<std::string>().c_str(), nullptr) == 0.125);
  CHECK(std::strtod(j["q_tilde_cr_hz"].get<std::string>().c_str(), nullptr) == -0.75);
  CHECK(j["unstable_count"][1] == 2);
  CHECK(j["maxima"][0]["q_hz"].is_string());

  sweep.has_q_tilde_cr = false;
  auto j2 = nlohmann::json::parse(sweep_summary_json(sweep));
  CHECK(j2["q_tilde_cr_hz"].is_null());

  ScalingFit fit;
  fit.atom_numbers = {2e4, 4e4};
  fit.q_res_hz = {10.0, 13.0};
  fit.gamma = 0.4;
  fit.gamma_stderr = 0.01;
  fit.log_prefactor = 1.0;
  fit.residuals = {0.0, 0.0};
  auto j3 = nlohmann::json::parse(scaling_summary_json(fit));
  CHECK(std::strtod(j3["gamma"].get<std::string>().c_str(), nullptr) == 0.4);

  auto j4 = nlohmann::json::parse(error_json("config", "bad key", 3));
  CHECK(j4["error"] == "config");
  CHECK(j4["exit_code"] == 3);
}

TEST_CASE("binary field files round-trip exactly") {
  const std::string dir = "/tmp/spinsim_io_test";
  ensure_directory(dir);
  const std::string path = dir + "/ramp.spnf";
  auto f = ramp_field();
  write_field_binary(path, f);
  auto g = read_field_binary(path);
  REQUIRE(g.grid.same_as(f.grid));
  REQUIRE(g.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);

  SUBCASE("corrupted magic is rejected") {
    auto bytes = read_text_file(path);
    bytes[0] = 'X';
    write_text_file(path, bytes);
    CHECK_THROWS_AS(read_field_binary(path), ConfigError);
  }
  SUBCASE("truncated payload is rejected") {
    auto bytes = read_text_file(path);
    bytes.resize(bytes.size() - 9);
    write_text_file(path, bytes);
    CHECK_THROWS_AS(read_field_binary(path), ConfigError);
  }
  SUBCASE("missing file is rejected") {
    CHECK_THROWS_AS(read_field_binary(dir + "/absent.spnf"), ConfigError);
  }
}

TEST_CASE("directory creation is recursive and idempotent") {
  const std::string base = "/tmp/spinsim_io_test/nested/a/b";
  std::filesystem::remove_all("/tmp/spinsim_io_test/nested");
  ensure_directory(base);
  CHECK(std::filesystem::is_directory(base));
  ensure_directory(base); // second call is a no-op
  write_text_file(base + "/x.txt", "payload");
  CHECK(read_text_file(base + "/x.txt") == "payload");
}

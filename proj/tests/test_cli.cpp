#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "nnrad/io/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("nnrad_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string(NNRAD_CLI) + " " + args + " > " + out.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  return r;
}

std::string config(const std::string& name) { return std::string(NNRAD_CONFIG_DIR) + "/" + name; }

/// Writes a config next to the shipped ones' data directory layout.
fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

std::string data_file(const std::string& name) { return std::string(NNRAD_DATA_DIR) + "/" + name; }

nnrad::io::Table table(const std::string& text) {
  std::stringstream ss(text);
  return nnrad::io::read_table(ss);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(CliSolve, DuffingFirstRow) {
  const RunResult r = run("solve --config " + config("duffing.json"));
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_GE(l.size(), 3u);
  EXPECT_EQ(l[0], "t,x_0,v_0,a_0");
  EXPECT_EQ(l[1], "0,2,0,-16");
  EXPECT_EQ(l.size(), 20002u);
}

TEST(CliSolve, ZeroDurationGivesInitialRowOnly) {
  const fs::path cfg = write_config("zero.json", R"({"schema_version": 1,
    "system": {"type": "pendulum"}, "initial": {"x": 1.0}, "time": {"t0": 0.5, "t_end": 0.5}})");
  const RunResult r = run("solve --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  const auto t = table(r.out);
  EXPECT_EQ(t.column("t")[0], 0.5);
  EXPECT_EQ(t.column("x_0")[0], 1.0);
}

TEST(CliSolve, OutputIsDeterministic) {
  const fs::path a = scratch() / "a.csv";
  const fs::path b = scratch() / "b.csv";
  ASSERT_EQ(run("solve --config " + config("van_der_pol.json") + " --out " + a.string()).code, 0);
  ASSERT_EQ(run("solve --config " + config("van_der_pol.json") + " --out " + b.string()).code, 0);
  EXPECT_FALSE(read_file(a).empty());
  EXPECT_EQ(read_file(a), read_file(b));
}

TEST(CliSolve, OverridesAndErrors) {
  const RunResult coarse = run("solve --config " + config("duffing.json") + " --dt 0.01 --strategy simplified");
  ASSERT_EQ(coarse.code, 0);
  EXPECT_EQ(lines(coarse.out).size(), 2002u);
  EXPECT_EQ(run("solve --config " + config("duffing.json") + " --dt -1").code, 2);
  EXPECT_NE(run("solve --config " + config("duffing.json") + " --strategy newton").code, 0);
  EXPECT_NE(run("solve").code, 0);
  const fs::path bad = write_config("bad.json", R"({"schema_version": 1, "system": {"type": "warp"}})");
  EXPECT_EQ(run("solve --config " + bad.string()).code, 2);
}

TEST(CliSweep, SingleSpeedGivesOneRow) {
  const fs::path cfg = write_config("one.json", R"({"schema_version": 1,
    "system": {"type": "sfd_rotor", "model_file": ")" + data_file("sfd_rotor.json") + R"("},
    "time": {"t_end": 0.2, "dt": 1e-4},
    "sweep": {"speeds": {"start": 800, "stop": 800, "count": 1}}})");
  const RunResult r = run("sweep --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  const auto t = table(r.out);
  ASSERT_EQ(t.rows(), 1u);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"speed", "A_disk"}));
  EXPECT_EQ(t.column("speed")[0], 800.0);
  EXPECT_GT(t.column("A_disk")[0], 0.0);
}

TEST(CliSweep, SfdAmplitudeFallsWithSpeed) {
  const fs::path cfg = write_config("three.json", R"({"schema_version": 1,
    "system": {"type": "sfd_rotor", "model_file": ")" + data_file("sfd_rotor.json") + R"("},
    "time": {"t_end": 1.0, "dt": 1e-4},
    "sweep": {"speeds": [600, 1000, 1400], "probes": [{"label": "disk", "x_dof": 0, "y_dof": 1}]}})");
  const RunResult r = run("sweep --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  const auto a = table(r.out).column("A_disk");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_GT(a[0], a[1]);
  EXPECT_GT(a[1], a[2]);
}

TEST(CliSweep, MalformedRangeIsConfigError) {
  const fs::path cfg = write_config("range.json", R"({"schema_version": 1, "system": {"type": "sfd_rotor"},
    "sweep": {"speeds": {"start": 900, "stop": 600, "count": 4}}})");
  EXPECT_EQ(run("sweep --config " + cfg.string()).code, 2);
  const fs::path nospeed = write_config("nospeed.json", R"({"schema_version": 1, "system": {"type": "duffing"},
    "sweep": {"speeds": [1, 2]}})");
  EXPECT_EQ(run("sweep --config " + nospeed.string()).code, 2);
}

TEST(CliSpectrum, SinePeakOnBin) {
  const fs::path csv = scratch() / "sine.csv";
  const int n = 1000;
  const double dt = 0.01;
  const double w = 2.0 * std::numbers::pi * 50.0 / (n * dt);
  {
    std::ofstream out(csv);
    out << "t,x_0\n";
    for (int i = 0; i < n; ++i)
      out << nnrad::io::format_double(i * dt) << ',' << nnrad::io::format_double(std::sin(w * i * dt)) << '\n';
  }
  const RunResult r = run("spectrum --input " + csv.string());
  ASSERT_EQ(r.code, 0);
  const auto t = table(r.out);
  const auto& mag = t.column("magnitude");
  const std::size_t peak = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  EXPECT_EQ(peak, 50u);
  EXPECT_NEAR(t.column("omega")[peak], w, 1e-9);
  EXPECT_NEAR(mag[peak], 1.0, 1e-9);
}

TEST(CliSpectrum, MissingColumnIsAnError) {
  const fs::path csv = scratch() / "tiny.csv";
  std::ofstream(csv) << "t,x_0\n0,1\n0.1,2\n0.2,0\n";
  EXPECT_EQ(run("spectrum --input " + csv.string() + " --column x_7").code, 2);
  const std::string err = read_file(scratch() / "stderr.txt");
  EXPECT_NE(err.find("x_0"), std::string::npos);
}

TEST(CliSpectrum, DuffingDominantBinNearForcing) {
  const fs::path traj = scratch() / "duffing.csv";
  ASSERT_EQ(run("solve --config " + config("duffing.json") + " --out " + traj.string()).code, 0);
  const RunResult r = run("spectrum --input " + traj.string() + " --column x_0");
  ASSERT_EQ(r.code, 0);
  const auto t = table(r.out);
  const auto& mag = t.column("magnitude");
  const auto& omega = t.column("omega");
  const std::size_t peak = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  // 20 s of data: bins are 2π/20 ≈ 0.314 rad/s apart.
  EXPECT_LE(std::abs(omega[peak] - 1.0), 0.5 * (omega[1] - omega[0]) + 1e-12);
}

TEST(CliCheckJacobian, PassesForOscillators) {
  for (const char* name : {"duffing.json", "van_der_pol.json", "pendulum.json"}) {
    const RunResult r = run("check-jacobian --config " + config(name));
    EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos) << name;
    EXPECT_NE(r.out.find("states: 100"), std::string::npos) << name;
  }
}

TEST(CliCheckJacobian, LinearSystemAnalyticError) {
  const RunResult r = run("check-jacobian --config " + config("linear_sdof.json"));
  ASSERT_EQ(r.code, 0);
  const std::string key = "analytic (linear system) relative error: ";
  const auto pos = r.out.find(key);
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(pos + key.size())), 1e-12);
}

TEST(CliCheckJacobian, SeedMakesRunsReproducible) {
  const RunResult a = run("check-jacobian --config " + config("duffing.json") + " --seed 99");
  const RunResult b = run("check-jacobian --config " + config("duffing.json") + " --seed 99");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("seed: 99"), std::string::npos);
}

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "thermoplast/cli_io.hpp"

using namespace thermoplast;
namespace fs = std::filesystem;

namespace {

using K = ConfigError::Kind;

// Runs parse_config and returns the error it throws.
ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError for:\n" << text);
  return ConfigError(K::syntax, "", 0, "");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("thermoplast_test_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const char* kSmall =
    "scenario = shear_ramp\n"
    "grid.nx = 6\n"
    "grid.ny = 6\n"
    "time.t_end = 0.04\n"
    "time.dt = 0.01\n"
    "flow.lambda = 0.05\n"
    "output.every = 2\n";

}  // namespace

TEST_CASE("empty config is the shear_ramp scenario") {
  CHECK(parse_config("") == scenario_config("shear_ramp"));
  CHECK(parse_config("# only a comment\n\n   \n") == scenario_config("shear_ramp"));
  for (const auto& name : scenario_names()) {
    if (name == "custom") continue;
    CHECK(parse_config("scenario = " + name) == scenario_config(name));
  }
}

TEST_CASE("values override one field each") {
  const ModelConfig c = parse_config(
      "grid.nx = 12  # trailing comment\n"
      "grid.ny = 12\n"
      "flow.k = 0.2\n"
      "solver.jacobi = yes\n"
      "output.vtk = 0\n"
      "diagnostics.tail_K = 1, 3,7\n"
      "loads.F = gaussian\n");
  ModelConfig e = scenario_config("shear_ramp");
  e.grid.nx = e.grid.ny = 12;
  e.flow.k = 0.2;
  e.solver.jacobi = true;
  e.output.vtk = false;
  e.diagnostics.tail_K = {1, 3, 7};
  e.loads.kind = BodyForceSpec::Kind::gaussian;
  CHECK(c == e);
}

TEST_CASE("alpha outside (1/2, 5/6) is rejected with key and line") {
  const ConfigError e = parse_error("grid.nx = 8\ngrid.ny = 8\nflow.alpha = 0.9\n");
  CHECK(e.key() == "flow.alpha");
  CHECK(e.line() == 3);
  CHECK(e.kind() == K::out_of_range);
  CHECK(std::string(e.what()).find("(1/2, 5/6)") != std::string::npos);
  CHECK(parse_error("flow.alpha = 0.5").key() == "flow.alpha");
  CHECK(parse_error("flow.alpha = 0.8333334").key() == "flow.alpha");
  CHECK_NOTHROW(parse_config("flow.alpha = 0.51"));
  CHECK_NOTHROW(parse_config("flow.alpha = 0.83"));
}

TEST_CASE("nonpositive lambda, k and dt are rejected") {
  for (const char* text : {"flow.lambda = 0", "flow.lambda = -1", "flow.k = 0", "flow.k = -0.1", "time.dt = 0",
                           "time.dt = -0.01"}) {
    const ConfigError e = parse_error(text);
    CAPTURE(text);
    CHECK(e.line() == 1);
    CHECK(std::string(text).rfind(e.key(), 0) == 0);
  }
  const ConfigError big = parse_error("flow.lambda = 0.001\n");
  CHECK(big.key() == "time.dt");
  CHECK_NOTHROW(parse_config("flow.lambda = 0.001\ntime.allow_dt_above_lambda = true\n"));
  CHECK(parse_error("time.dt = 0.003\n").key() == "time.dt");
}

TEST_CASE("syntax, unknown, duplicate and missing keys") {
  const ConfigError s = parse_error("grid.nx = 4\ngrid.ny 4\n");
  CHECK(s.kind() == K::syntax);
  CHECK(s.line() == 2);

  const ConfigError u = parse_error("\n\nflow.kk = 1\n");
  CHECK(u.kind() == K::unknown_key);
  CHECK(u.key() == "flow.kk");
  CHECK(u.line() == 3);

  const ConfigError d = parse_error("flow.k = 1\nflow.k = 2\n");
  CHECK(d.kind() == K::syntax);
  CHECK(d.key() == "flow.k");
  CHECK(d.line() == 2);

  CHECK(parse_error("flow.k =\n").kind() == K::syntax);
  CHECK(parse_error("= 3\n").kind() == K::syntax);
  CHECK(parse_error("grid.nx = four\n").kind() == K::invalid_value);
  CHECK(parse_error("grid.nx = 4.5\n").kind() == K::invalid_value);
  CHECK(parse_error("solver.jacobi = maybe\n").kind() == K::invalid_value);
  CHECK(parse_error("flow.f = cubic\n").kind() == K::invalid_value);
  CHECK(parse_error("seed = -1\n").kind() == K::invalid_value);
  CHECK(parse_error("scenario = bogus\n").key() == "scenario");

  const ConfigError m = parse_error("scenario = custom\nflow.k = 0.1\nflow.lambda = 0.1\ntime.dt = 0.01\n");
  CHECK(m.kind() == K::missing_key);
  CHECK(m.key() == "time.t_end");
  CHECK_NOTHROW(parse_config("scenario = custom\nflow.k = 0.1\nflow.lambda = 0.1\ntime.dt = 0.01\ntime.t_end = 0.1\n"));

  const ConfigError ex = parse_error("flow.f = expression\n");
  CHECK(ex.key() == "flow.expression");
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.txt"), ConfigError);
}

TEST_CASE("property: serialize then parse is the identity") {
  for (const auto& name : scenario_names()) {
    ModelConfig c = scenario_config(name);
    if (name == "custom") c.flow.k = 0.07;
    CHECK(parse_config(serialize_config(c)) == c);
  }
  ModelConfig c = scenario_config("thermal_bump");
  c.grid = {10, 5, 2.0, 1.0};
  c.material = {0.3, 0.7};
  c.flow.k = 1.0 / 3.0;
  c.flow.lambda = 0.0123456789012345;
  c.flow.f.kind = ThermalStressFunction::Kind::expression;
  c.flow.f.expression = Expression::parse("0.4 * ((1 + max(r, 0))^0.6 - 1) - 0.2 * min(r, 0) / sqrt(1 + abs(r))");
  c.thermal.g.kind = BoundaryFluxSpec::Kind::sin_time;
  c.thermal.g.value = -2.5e-7;
  c.thermal.g.omega = 3.14159;
  c.loads.kind = BodyForceSpec::Kind::gaussian;
  c.loads.fy = -0.1;
  c.time = {0.3, 0.01, true};
  c.solver.jacobi = true;
  c.solver.picard_damping = 0.7;
  c.output = {3, false, true};
  c.diagnostics.tail_K = {0.5, 4};
  c.diagnostics.renorm_M = {3};
  c.seed = 4000000000u;
  CHECK_NOTHROW(c.validate());
  const std::string text = serialize_config(c);
  const ModelConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("write_atomic replaces the file and leaves no temporary") {
  TempDir dir("atomic");
  const fs::path p = dir.path() / "a.txt";
  write_atomic(p, "first\n");
  write_atomic(p, "second\n");
  CHECK(slurp(p) == "second\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS(write_atomic(dir.path() / "missing" / "b.txt", "x"));
}

TEST_CASE("snapshot formats") {
  const Grid g(3, 2, 1.5, 1.0);
  State s;
  s.t = 0.25;
  s.u.assign(2 * g.node_count(), 0.0);
  s.theta.assign(g.node_count(), 0.0);
  s.stress.assign(4 * g.cell_count(), SymTensor{});
  s.eps_p.assign(4 * g.cell_count(), SymTensor{});
  for (int n = 0; n < g.node_count(); ++n) {
    s.u[2 * n] = n;
    s.u[2 * n + 1] = -0.5 * n;
    s.theta[n] = 0.1 * n;
  }
  const NodalScalar tilde(g.node_count(), 1.0);

  const std::string vtk = vtk_snapshot(g, s, tilde, 7);
  CHECK(vtk.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(vtk.find("DIMENSIONS 4 3 1\n") != std::string::npos);
  CHECK(vtk.find("POINT_DATA 12\n") != std::string::npos);
  CHECK(vtk.find("CELL_DATA 6\n") != std::string::npos);
  CHECK(vtk.find("VECTORS u double\n0 -0 0\n1 -0.5 0\n") != std::string::npos);

  const std::string csv = csv_snapshot(g, s, tilde);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "node,x,y,ux,uy,theta,theta_total");
  CHECK(count_lines(csv) == 13);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "1,0.5,0,1,-0.5,0.10000000000000001,1.1000000000000001");
}

TEST_CASE("run writes config echo, snapshots, diagnostics and summary") {
  TempDir dir("run");
  RunManifest m;
  m.config = parse_config(kSmall);
  m.output_dir = dir.path() / "a";
  std::ostringstream log;
  REQUIRE(cmd_run(m, log) == exit_ok);

  CHECK(parse_config(slurp(m.output_dir / "config.echo")) == m.config);
  for (int s : {0, 2, 4}) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%06d", s);
    CHECK(fs::exists(m.output_dir / "snapshots" / (std::string(name) + ".vtk")));
    CHECK(fs::exists(m.output_dir / "snapshots" / (std::string(name) + ".csv")));
  }
  CHECK_FALSE(fs::exists(m.output_dir / "snapshots" / "step_000001.vtk"));
  const std::string diag = slurp(m.output_dir / "diagnostics.csv");
  CHECK(count_lines(diag) == 1 + output_steps(m.config).size());
  CHECK(diag.rfind("step,t,stress_energy,", 0) == 0);
  const std::string summary = slurp(m.output_dir / "summary.txt");
  CHECK(summary.find("scenario shear_ramp") != std::string::npos);
  CHECK(summary.find("FAIL") == std::string::npos);

  // rerun into a fresh directory is bitwise identical
  RunManifest m2 = m;
  m2.output_dir = dir.path() / "b";
  REQUIRE(cmd_run(m2, log) == exit_ok);
  CHECK(slurp(m2.output_dir / "diagnostics.csv") == diag);
  CHECK(slurp(m2.output_dir / "snapshots" / "step_000004.csv") ==
        slurp(m.output_dir / "snapshots" / "step_000004.csv"));
}

TEST_CASE("a single step writes exactly the initial and final snapshot") {
  TempDir dir("onestep");
  RunManifest m;
  m.config = parse_config("grid.nx = 4\ngrid.ny = 4\ntime.t_end = 0.01\ntime.dt = 0.01\noutput.every = 5\n");
  m.output_dir = dir.path();
  std::ostringstream log;
  REQUIRE(cmd_run(m, log) == exit_ok);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir.path() / "snapshots")) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"step_000000.csv", "step_000000.vtk", "step_000001.csv", "step_000001.vtk"});
  CHECK(count_lines(slurp(dir.path() / "diagnostics.csv")) == 3);
}

TEST_CASE("sweep: equal lambdas give a zero metric") {
  TempDir dir("sweep_eq");
  RunManifest m;
  m.config = parse_config(kSmall);
  m.config.output.vtk = m.config.output.csv = false;
  m.output_dir = dir.path();
  std::ostringstream log;
  REQUIRE(cmd_sweep(m, {0.05, 0.05}, log) == exit_ok);
  std::istringstream in(slurp(dir.path() / "cauchy.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,t,lambda_0.05_vs_0.05");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == static_cast<int>(output_steps(m.config).size()));
  CHECK(fs::exists(dir.path() / "lambda_0.05" / "diagnostics.csv"));
}

TEST_CASE("sweep: a failing member reports exit 2 and keeps the rest") {
  TempDir dir("sweep_fail");
  RunManifest m;
  m.config = parse_config(kSmall);
  m.config.output.vtk = m.config.output.csv = false;
  m.output_dir = dir.path();
  std::ostringstream log;
  // dt = 0.01 exceeds the second lambda, so that member fails validation
  CHECK(cmd_sweep(m, {0.05, 0.005}, log) == exit_solver);
  CHECK(fs::exists(dir.path() / "lambda_0.05" / "diagnostics.csv"));
  CHECK(fs::exists(dir.path() / "cauchy.csv"));
  const std::string summary = slurp(dir.path() / "summary.txt");
  CHECK(summary.find("failed lambda 0.005") != std::string::npos);
  CHECK(summary.find("not decreasing") != std::string::npos);

  CHECK(cmd_sweep(m, {0.05}, log) == exit_config);
  CHECK(cmd_sweep(m, {0.02, 0.05}, log) == exit_config);
  CHECK(cmd_sweep(m, {0.05, -0.01}, log) == exit_config);
}

TEST_CASE("verify and mms succeed") {
  std::ostringstream log;
  for (unsigned seed : {1u, 7u, 12345u}) {
    RunManifest m;
    m.seed = seed;
    CHECK(cmd_verify(m, log) == exit_ok);
  }
  CHECK(cmd_mms(RunManifest{}, log) == exit_ok);
  CHECK(log.str().find("FAIL") == std::string::npos);
}

#ifdef THERMOPLAST_CLI_PATH
TEST_CASE("command-line exit codes") {
  TempDir dir("cli");
  const fs::path bad = dir.path() / "bad.cfg";
  write_atomic(bad, "flow.alpha = 0.9\n");
  const fs::path good = dir.path() / "good.cfg";
  write_atomic(good, "grid.nx = 4\ngrid.ny = 4\ntime.t_end = 0.02\ntime.dt = 0.01\n");
  const std::string exe = THERMOPLAST_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int rc = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(status("run -c " + bad.string() + " -o " + (dir.path() / "o1").string()) == exit_config);
  CHECK(status("run -c " + good.string() + " -o " + (dir.path() / "o2").string()) == exit_ok);
  CHECK(fs::exists(dir.path() / "o2" / "summary.txt"));
  CHECK(status("sweep -c " + good.string() + " -l 0.01,0.05 -o " + (dir.path() / "o3").string()) == exit_config);
  CHECK(status("run --no-such-flag") == exit_config);
  CHECK(status("run -s bogus") == exit_config);
  CHECK(status("--help") == exit_ok);
}
#endif

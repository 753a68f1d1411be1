#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "thermoplast/coupled_solver.hpp"
#include "thermoplast/diagnostics.hpp"
#include "thermoplast/model_config.hpp"
#include "thermoplast/state.hpp"

namespace thermoplast {

/// Exit statuses of the command-line driver.
enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_solver = 2, exit_verify = 3 };

/// Defaults of a named scenario: shear_ramp, thermal_bump, elastic_only or
/// custom. Throws ConfigError for other names.
ModelConfig scenario_config(const std::string& name);
std::vector<std::string> scenario_names();

/// Parses `section.key = value` lines. The scenario key selects the starting
/// defaults; every other key overrides one field. Throws ConfigError with the
/// offending key and line.
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::filesystem::path& path);

/// Full listing of every key, parseable by parse_config.
std::string serialize_config(const ModelConfig& cfg);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Legacy VTK structured points: nodal theta (homogenized and total) and u,
/// cell averages of |P T| and |eps_p|.
std::string vtk_snapshot(const Grid& grid, const State& s, const NodalScalar& theta_tilde, int step);

/// CSV with columns node,x,y,ux,uy,theta,theta_total.
std::string csv_snapshot(const Grid& grid, const State& s, const NodalScalar& theta_tilde);

/// Rows at the given steps.
std::string diagnostics_csv(const DiagnosticsReport& report, const std::vector<int>& steps);

std::string cauchy_csv(const SweepResult& sweep, double dt);

std::string summary_text(const DiagnosticsReport& report, const ModelConfig& cfg);

/// Steps at which snapshots and diagnostics rows are written.
std::vector<int> output_steps(const ModelConfig& cfg);

struct RunManifest {
  std::filesystem::path config_path;
  ModelConfig config;
  std::filesystem::path output_dir = "out";
  std::string command = "run";
  unsigned seed = 12345;
};

int cmd_run(const RunManifest& manifest, std::ostream& log);
int cmd_sweep(const RunManifest& manifest, const std::vector<double>& lambdas, std::ostream& log);
int cmd_verify(const RunManifest& manifest, std::ostream& log);
int cmd_mms(const RunManifest& manifest, std::ostream& log);

}  // namespace thermoplast

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "thermoplast/cli_io.hpp"
#include "thermoplast/verification.hpp"

namespace thermoplast {

namespace {

namespace fs = std::filesystem;

fs::path snapshot_path(const fs::path& dir, int step, const char* ext) {
  return dir / "snapshots" / fmt::format("step_{:06d}.{}", step, ext);
}

void prepare_dir(const fs::path& dir, const ModelConfig& cfg) {
  fs::create_directories(dir);
  if (cfg.output.vtk || cfg.output.csv) fs::create_directories(dir / "snapshots");
  write_atomic(dir / "config.echo", serialize_config(cfg));
}

SnapshotSink snapshot_writer(const fs::path& dir, const ModelConfig& cfg) {
  const Grid grid(cfg.grid.nx, cfg.grid.ny, cfg.grid.lx, cfg.grid.ly);
  return [dir, grid, vtk = cfg.output.vtk, csv = cfg.output.csv](const State& s, const NodalScalar& tilde, int step) {
    if (vtk) write_atomic(snapshot_path(dir, step, "vtk"), vtk_snapshot(grid, s, tilde, step));
    if (csv) write_atomic(snapshot_path(dir, step, "csv"), csv_snapshot(grid, s, tilde));
  };
}

// Writes diagnostics for whatever part of the run exists.
void write_diagnostics(const fs::path& dir, const Trajectory& traj, const ModelConfig& cfg, bool complete) {
  const DiagnosticsReport report = build_report(traj, cfg);
  std::vector<int> steps;
  for (int s : output_steps(cfg))
    if (s < static_cast<int>(report.rows.size())) steps.push_back(s);
  if (!complete && !report.rows.empty() && (steps.empty() || steps.back() != static_cast<int>(report.rows.size()) - 1))
    steps.push_back(static_cast<int>(report.rows.size()) - 1);
  write_atomic(dir / "diagnostics.csv", diagnostics_csv(report, steps));
  std::string summary = summary_text(report, cfg);
  if (!complete) summary += "status incomplete\n";
  write_atomic(dir / "summary.txt", summary);
}

void warn_dt(const ModelConfig& cfg, std::ostream& log) {
  if (cfg.time.dt > cfg.flow.lambda)
    fmt::print(log, "warning: dt = {} exceeds lambda = {}; the plastic update may be stiff\n", cfg.time.dt,
               cfg.flow.lambda);
}

// Runs one member into `dir`; returns an exit code.
int run_into(const fs::path& dir, const ModelConfig& cfg, std::ostream& log, Trajectory* keep) {
  prepare_dir(dir, cfg);
  warn_dt(cfg, log);
  try {
    Trajectory traj = run_simulation(cfg, snapshot_writer(dir, cfg));
    write_diagnostics(dir, traj, cfg, true);
    if (keep) *keep = std::move(traj);
    return exit_ok;
  } catch (const SimulationError& e) {
    fmt::print(log, "solver failure: {}\n", e.what());
    if (e.partial()) write_diagnostics(dir, *e.partial(), cfg, false);
    return exit_solver;
  } catch (const SolverError& e) {
    fmt::print(log, "solver failure: {}\n", e.what());
    return exit_solver;
  }
}

}  // namespace

int cmd_run(const RunManifest& m, std::ostream& log) {
  const int code = run_into(m.output_dir, m.config, log, nullptr);
  if (code == exit_ok) fmt::print(log, "run complete: {} steps, output in {}\n", m.config.steps(), m.output_dir.string());
  return code;
}

int cmd_sweep(const RunManifest& m, const std::vector<double>& lambdas, std::ostream& log) {
  if (lambdas.size() < 2) {
    fmt::print(log, "sweep needs at least two lambda values\n");
    return exit_config;
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && lambdas[i] > lambdas[i - 1])) {
      fmt::print(log, "lambda values must be positive and decreasing\n");
      return exit_config;
    }
  }
  fs::create_directories(m.output_dir);
  write_atomic(m.output_dir / "config.echo", serialize_config(m.config));

  SweepResult sweep;
  sweep.output_steps = output_steps(m.config);
  int code = exit_ok;
  for (double lambda : lambdas) {
    ModelConfig c = m.config;
    c.flow.lambda = lambda;
    SweepMember member;
    member.lambda = lambda;
    const fs::path dir = m.output_dir / fmt::format("lambda_{}", lambda);
    try {
      c.validate();
      const int rc = run_into(dir, c, log, &member.trajectory);
      member.ok = rc == exit_ok;
      if (!member.ok) {
        member.error = "solver failure";
        code = exit_solver;
      }
    } catch (const ConfigError& e) {
      member.error = e.what();
      fmt::print(log, "lambda {}: {}\n", lambda, e.what());
      code = exit_solver;
    }
    fmt::print(log, "lambda {}: {}\n", lambda, member.ok ? "ok" : member.error);
    // only the output-time stresses are needed for the metrics
    if (member.ok) {
      Trajectory slim;
      slim.grid = member.trajectory.grid;
      slim.dt = member.trajectory.dt;
      slim.states.resize(member.trajectory.states.size());
      for (int s : sweep.output_steps) slim.states[s].stress = std::move(member.trajectory.states[s].stress);
      member.trajectory = std::move(slim);
    }
    sweep.members.push_back(std::move(member));
  }

  const ElasticityTensor d(m.config.material.lame_first, m.config.material.lame_second);
  for (std::size_t p = 0; p + 1 < sweep.members.size(); ++p) {
    const auto& a = sweep.members[p];
    const auto& b = sweep.members[p + 1];
    std::vector<double> row;
    for (int s : sweep.output_steps)
      row.push_back(a.ok && b.ok ? cauchy_metric(a.trajectory.grid, a.trajectory.states[s].stress,
                                                 b.trajectory.states[s].stress, d)
                                 : std::nan(""));
    sweep.metrics.push_back(std::move(row));
  }
  write_atomic(m.output_dir / "cauchy.csv", cauchy_csv(sweep, m.config.time.dt));

  bool decreasing = true;
  std::string summary = "pair,final_metric\n";
  for (std::size_t p = 0; p < sweep.metrics.size(); ++p) {
    const double v = sweep.metrics[p].back();
    summary += fmt::format("{}-{},{:.17g}\n", sweep.members[p].lambda, sweep.members[p + 1].lambda, v);
    if (p > 0 && !(v < sweep.metrics[p - 1].back())) decreasing = false;
    if (std::isnan(v)) decreasing = false;
  }
  for (const auto& mem : sweep.members)
    if (!mem.ok) summary += fmt::format("failed lambda {}: {}\n", mem.lambda, mem.error);
  summary += fmt::format("verdict {}\n", decreasing ? "decreasing" : "not decreasing");
  write_atomic(m.output_dir / "summary.txt", summary);
  fmt::print(log, "{}", summary);
  return code;
}

int cmd_verify(const RunManifest& m, std::ostream& log) {
  bool all = true;
  for (const auto& r : run_property_suites(m.seed)) {
    fmt::print(log, "{:<20} {}  ({})\n", r.name, r.pass ? "PASS" : "FAIL", r.detail);
    all = all && r.pass;
  }
  fmt::print(log, "verify: {}\n", all ? "all suites passed" : "failures");
  return all ? exit_ok : exit_verify;
}

int cmd_mms(const RunManifest&, std::ostream& log) {
  const std::vector<int> ns = {16, 32, 64};
  bool all = true;
  for (const auto& study : {elasticity_study(ns), laplacian_study(ns), heat_study(ns)}) {
    const auto orders = study.orders();
    for (std::size_t i = 0; i < study.n.size(); ++i)
      fmt::print(log, "{:<18} h = 1/{:<4} error {:.6e}{}\n", study.name, study.n[i], study.error[i],
                 i > 0 ? fmt::format("  order {:.3f}", orders[i - 1]) : std::string());
    const bool ok = study.min_order() >= 1.8;
    fmt::print(log, "{:<18} {}\n", study.name, ok ? "PASS" : "FAIL");
    all = all && ok;
  }
  const double lin = mms_linear_displacement_error(16);
  const bool lin_ok = lin <= 1e-10;
  fmt::print(log, "{:<18} max error {:.3e} {}\n", "affine_exact", lin, lin_ok ? "PASS" : "FAIL");
  return all && lin_ok ? exit_ok : exit_verify;
}

}  // namespace thermoplast

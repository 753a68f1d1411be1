#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "thermoplast/cli_io.hpp"

namespace thermoplast {

namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string vtk_snapshot(const Grid& grid, const State& s, const NodalScalar& theta_tilde, int step) {
  std::string o;
  o += "# vtk DataFile Version 3.0\n";
  o += fmt::format("thermoplast step {} t {}\n", step, g17(s.t));
  o += "ASCII\nDATASET STRUCTURED_POINTS\n";
  o += fmt::format("DIMENSIONS {} {} 1\n", grid.nx() + 1, grid.ny() + 1);
  o += "ORIGIN 0 0 0\n";
  o += fmt::format("SPACING {} {} 1\n", g17(grid.h()), g17(grid.h()));
  const int nn = grid.node_count();
  o += fmt::format("POINT_DATA {}\n", nn);
  o += "SCALARS theta double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < nn; ++n) o += g17(s.theta[n]) + "\n";
  o += "SCALARS theta_total double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < nn; ++n) o += g17(s.theta[n] + theta_tilde[n]) + "\n";
  o += "VECTORS u double\n";
  for (int n = 0; n < nn; ++n) o += fmt::format("{} {} 0\n", g17(s.u[2 * n]), g17(s.u[2 * n + 1]));
  o += fmt::format("CELL_DATA {}\n", grid.cell_count());
  o += "SCALARS dev_stress double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < grid.cell_count(); ++c) {
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) acc += norm(deviator(s.stress[4 * c + q]));
    o += g17(0.25 * acc) + "\n";
  }
  o += "SCALARS plastic_strain double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < grid.cell_count(); ++c) {
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) acc += norm(s.eps_p[4 * c + q]);
    o += g17(0.25 * acc) + "\n";
  }
  return o;
}

std::string csv_snapshot(const Grid& grid, const State& s, const NodalScalar& theta_tilde) {
  std::string o = "node,x,y,ux,uy,theta,theta_total\n";
  for (int n = 0; n < grid.node_count(); ++n) {
    const Point2 p = grid.node_point(n);
    o += fmt::format("{},{},{},{},{},{},{}\n", n, g17(p.x), g17(p.y), g17(s.u[2 * n]), g17(s.u[2 * n + 1]),
                     g17(s.theta[n]), g17(s.theta[n] + theta_tilde[n]));
  }
  return o;
}

std::string diagnostics_csv(const DiagnosticsReport& report, const std::vector<int>& steps) {
  std::string o =
      "step,t,stress_energy,viscous_work,theta_mass,trunc_gradient,dissipation_min,m_lambda_residual,"
      "m_lambda_relative,stress_rate_norm,boccardo_norm";
  for (double k : report.tail_K) o += fmt::format(",trunc_tail_K{}", k);
  o += ",picard_iterations\n";
  for (int s : steps) {
    const DiagnosticsRow& r = report.rows.at(s);
    o += fmt::format("{},{},{},{},{},{},{},{},{},{},{}", r.step, g17(r.t), g17(r.energy.stress_energy),
                     g17(r.energy.viscous_work), g17(r.energy.theta_mass), g17(r.energy.trunc_gradient),
                     g17(r.dissipation_min), g17(r.m_lambda_residual), g17(r.m_lambda_relative),
                     g17(r.stress_rate_norm), g17(r.boccardo_norm));
    for (double v : r.trunc_tail) o += "," + g17(v);
    o += fmt::format(",{}\n", r.picard_iterations);
  }
  return o;
}

std::string cauchy_csv(const SweepResult& sweep, double dt) {
  std::string o = "step,t";
  for (std::size_t p = 0; p + 1 < sweep.members.size(); ++p)
    o += fmt::format(",lambda_{}_vs_{}", sweep.members[p].lambda, sweep.members[p + 1].lambda);
  o += "\n";
  for (std::size_t k = 0; k < sweep.output_steps.size(); ++k) {
    const int s = sweep.output_steps[k];
    o += fmt::format("{},{}", s, g17(s * dt));
    for (const auto& row : sweep.metrics) o += "," + g17(row[k]);
    o += "\n";
  }
  return o;
}

std::string summary_text(const DiagnosticsReport& report, const ModelConfig& cfg) {
  std::string o = fmt::format("scenario {}\nlambda {}\nsteps {}\n", cfg.scenario, cfg.flow.lambda, cfg.steps());
  bool all = true;
  for (const auto& c : summarize(report, cfg)) {
    o += fmt::format("{:<28} {:>24} threshold {:<10} {}\n", c.name, g17(c.value), c.threshold, c.pass ? "PASS" : "FAIL");
    all = all && c.pass;
  }
  for (std::size_t i = 0; i < report.renorm_residual.size(); ++i)
    o += fmt::format("renorm_residual_M{:<12} {:>24}\n", report.renorm_M[i], g17(report.renorm_residual[i]));
  if (!report.rows.empty()) {
    const auto& tail = report.rows.back().trunc_tail;
    for (std::size_t i = 0; i < tail.size(); ++i)
      o += fmt::format("trunc_tail_K{:<16} {:>24}\n", report.tail_K[i], g17(tail[i]));
  }
  o += fmt::format("verdict {}\n", all ? "PASS" : "FAIL");
  return o;
}

std::vector<int> output_steps(const ModelConfig& cfg) {
  std::vector<int> out;
  const int n = cfg.steps();
  for (int s = 0; s <= n; ++s)
    if (s % cfg.output.every == 0 || s == n) out.push_back(s);
  return out;
}

}  // namespace thermoplast

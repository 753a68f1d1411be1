#include "thermoplast/coupled_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thermoplast/fem.hpp"

namespace thermoplast {

namespace {

double max_abs_diff(const TensorField& a, const TensorField& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, norm(a[q] - b[q]));
  return m;
}

TensorField elastic_stress(const ElasticityTensor& d, const TensorField& e, const TensorField& eps_p) {
  TensorField t(e.size());
  for (std::size_t q = 0; q < e.size(); ++q) t[q] = d.apply(e[q] - eps_p[q]);
  return t;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

CoupledSolver::CoupledSolver(ModelConfig cfg)
    : cfg_(std::move(cfg)),
      grid_(cfg_.grid.nx, cfg_.grid.ny, cfg_.grid.lx, cfg_.grid.ly),
      d_(cfg_.material.lame_first, cfg_.material.lame_second),
      ys_(cfg_.flow.k),
      yp_(cfg_.flow.lambda) {
  cfg_.validate();
  const double dt = cfg_.time.dt;
  solve_opts_ = SolveOptions{cfg_.solver.cg_tol, cfg_.solver.cg_maxit, cfg_.solver.jacobi};
  elastic_ = assemble_elasticity(grid_, d_);
  visco_ = LinearOperator::combine(1.0 + 1.0 / dt, elastic_, 0.0, elastic_);
  mass_ = assemble_mass(grid_);
  heat_ = LinearOperator::combine(1.0 / dt, mass_, 1.0, assemble_laplacian_neumann(grid_));
  const NeumannData g = NeumannData::from_spec(grid_, cfg_.thermal.g, cfg_.time.t_end, dt);
  lift_ = solve_tilde_theta(grid_, g, cfg_.time.t_end, dt, solve_opts_);
}

State CoupledSolver::initial_state() const {
  State s;
  s.t = 0.0;
  s.u.assign(2 * grid_.node_count(), 0.0);
  s.eps_p.assign(grid_.quad_count(), SymTensor{});
  s.stress.assign(grid_.quad_count(), SymTensor{});
  s.heat_source.assign(grid_.quad_count(), 0.0);
  const auto& th = cfg_.thermal.theta0;
  const double lx = grid_.lx();
  const double ly = grid_.ly();
  s.theta = sample_nodes(grid_, [&](double x, double y) { return th.evaluate(x, y, lx, ly); });
  return s;
}

std::vector<double> CoupledSolver::body_load(double t) const {
  if (cfg_.loads.kind == BodyForceSpec::Kind::zero) return std::vector<double>(2 * grid_.node_count(), 0.0);
  std::vector<double> f(2 * grid_.quad_count());
  for (int q = 0; q < grid_.quad_count(); ++q) {
    const Point2 p = grid_.quad_point(q);
    const auto v = cfg_.loads.evaluate(p.x, p.y, t);
    f[2 * q] = v[0];
    f[2 * q + 1] = v[1];
  }
  return body_force_load(grid_, f);
}

QuadScalar CoupledSolver::thermal_stress(std::span<const double> theta,
                                         std::span<const double> theta_tilde) const {
  const double height = yp_.truncation_height();
  std::vector<double> total(theta.begin(), theta.end());
  axpy(1.0, theta_tilde, total);
  QuadScalar vals = interpolate(grid_, total);
  for (double& v : vals) v = eval_f(cfg_.flow.f, truncate(v, height));
  return vals;
}

NodalVector CoupledSolver::elastic_visco_step(std::span<const double> u_old, const TensorField& eps_p_iter,
                                              std::span<const double> f_values,
                                              std::span<const double> body) const {
  TensorField de(eps_p_iter.size());
  for (std::size_t q = 0; q < de.size(); ++q) de[q] = d_.apply(eps_p_iter[q]);
  std::vector<double> rhs = stress_load(grid_, de);
  axpy(1.0, divergence_scalar_weighted_load(grid_, f_values), rhs);
  axpy(1.0, body, rhs);
  axpy(1.0 / dt(), elastic_.apply(u_old), rhs);
  elastic_.constrain(rhs);
  return solve_spd(visco_, rhs, solve_opts_, u_old).x;
}

TensorField CoupledSolver::plastic_update(const TensorField& t_iter, const TensorField& eps_p_old) const {
  TensorField out(eps_p_old.size());
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = eps_p_old[q] + dt() * yosida(t_iter[q], ys_, yp_);
  return out;
}

TensorField CoupledSolver::local_return(const TensorField& e, const TensorField& eps_p_old) const {
  const double k = ys_.k();
  const double lambda = yp_.lambda();
  const double c = d_.lame_second() * dt() / lambda;
  TensorField out(eps_p_old.size());
  for (std::size_t q = 0; q < out.size(); ++q) {
    const SymTensor dev = deviator(d_.apply(e[q] - eps_p_old[q]));
    const double r = norm(dev);
    if (r <= k) {
      out[q] = eps_p_old[q];
      continue;
    }
    // |P T| after the return, from |PT| = r - 2 mu dt (|PT| - k) / (2 lambda)
    const double r_new = (r + c * k) / (1.0 + c);
    out[q] = eps_p_old[q] + traceless((dt() * (r_new - k) / (2.0 * lambda * r)) * dev);
  }
  return out;
}

MechanicsResult CoupledSolver::solve_mechanics(const State& s, std::span<const double> f_values,
                                               std::span<const double> body) const {
  MechanicsResult m;
  TensorField eps_it = plastic_update(s.stress, s.eps_p);
  const double tol = cfg_.solver.picard_tol;
  for (int it = 1;; ++it) {
    m.u = elastic_visco_step(s.u, eps_it, f_values, body);
    const TensorField e = strain(grid_, m.u);
    TensorField eps_new = local_return(e, s.eps_p);
    const double change = max_abs_diff(eps_new, eps_it);
    eps_it = std::move(eps_new);
    m.iterations = it;
    if (change <= tol) {
      m.stress = elastic_stress(d_, e, eps_it);
      break;
    }
    if (it >= cfg_.solver.plastic_max) {
      std::ostringstream os;
      os << "plastic iteration did not converge in " << it << " iterations (change " << change << ")";
      throw PicardError(os.str(), {change});
    }
  }
  m.eps_p = std::move(eps_it);
  return m;
}

QuadScalar CoupledSolver::heat_source(std::span<const double> f_values, std::span<const double> div_u_rate,
                                      const TensorField& eps_p_rate, const TensorField& t_iter) const {
  const double height = yp_.truncation_height();
  QuadScalar src(f_values.size());
  for (std::size_t q = 0; q < src.size(); ++q)
    src[q] = -f_values[q] * div_u_rate[q] + truncate(inner(eps_p_rate[q], t_iter[q]), height);
  return src;
}

NodalScalar CoupledSolver::heat_step(std::span<const double> theta_old, std::span<const double> theta_iter,
                                     std::span<const double> theta_tilde, const TensorField& eps_p_rate,
                                     const TensorField& t_iter, std::span<const double> div_u_rate) const {
  const QuadScalar f = thermal_stress(theta_iter, theta_tilde);
  return heat_step_with_source(theta_old, heat_source(f, div_u_rate, eps_p_rate, t_iter));
}

NodalScalar CoupledSolver::heat_step_with_source(std::span<const double> theta_old,
                                                 std::span<const double> source) const {
  std::vector<double> rhs = mass_.apply(theta_old);
  for (double& v : rhs) v /= dt();
  axpy(1.0, scalar_source_load(grid_, source), rhs);
  return solve_spd(heat_, rhs, solve_opts_, theta_old).x;
}

double CoupledSolver::lr_norm(std::span<const double> nodal) const {
  const double r = cfg_.solver.picard_r;
  QuadScalar v = interpolate(grid_, nodal);
  for (double& x : v) x = std::pow(std::abs(x), r);
  return std::pow(integrate(grid_, v), 1.0 / r);
}

State CoupledSolver::picard_step(const State& s, int step, StepInfo* info) const {
  const double t_next = s.t + dt();
  const NodalScalar& tilde = theta_tilde(step + 1);
  const std::vector<double> body = body_load(t_next);
  const double omega = cfg_.solver.picard_damping;
  const bool decoupled = cfg_.flow.f.vanishes();

  StepInfo local;
  std::vector<double> history;
  NodalScalar theta_star = s.theta;
  State out;
  out.t = t_next;
  for (int it = 1;; ++it) {
    const QuadScalar f = thermal_stress(theta_star, tilde);
    MechanicsResult mech = solve_mechanics(s, f, body);
    local.plastic_iterations += mech.iterations;

    TensorField rate(mech.eps_p.size());
    for (std::size_t q = 0; q < rate.size(); ++q) rate[q] = (mech.eps_p[q] - s.eps_p[q]) / dt();
    std::vector<double> du(mech.u);
    axpy(-1.0, s.u, du);
    QuadScalar div_rate = divergence(grid_, du);
    for (double& v : div_rate) v /= dt();

    QuadScalar src = heat_source(f, div_rate, rate, mech.stress);
    NodalScalar theta_new = heat_step_with_source(s.theta, src);

    std::vector<double> diff(theta_new);
    axpy(-1.0, theta_star, diff);
    const double change = lr_norm(diff);
    history.push_back(change);

    out.u = std::move(mech.u);
    out.eps_p = std::move(mech.eps_p);
    out.stress = std::move(mech.stress);
    out.heat_source = std::move(src);
    local.picard_iterations = it;
    local.picard_change = change;

    if (decoupled || change < cfg_.solver.picard_tol) {
      out.theta = std::move(theta_new);
      break;
    }
    if (it >= cfg_.solver.picard_max) {
      std::ostringstream os;
      os << "Picard iteration did not converge in " << it << " iterations (last change " << change << ")";
      throw PicardError(os.str(), history);
    }
    for (std::size_t i = 0; i < theta_star.size(); ++i)
      theta_star[i] = omega * theta_new[i] + (1.0 - omega) * theta_star[i];
  }

  local.dissipation_min = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < out.eps_p.size(); ++q) {
    const double dis = inner((out.eps_p[q] - s.eps_p[q]) / dt(), out.stress[q]);
    local.dissipation_min = std::min(local.dissipation_min, dis);
    local.plastic_trace_max = std::max(local.plastic_trace_max, std::abs(out.eps_p[q].trace()));
  }
  if (info) *info = local;
  return out;
}

double CoupledSolver::monolithic_residual(const State& before, const State& after, int step) const {
  const NodalScalar& tilde = theta_tilde(step + 1);
  const QuadScalar f = thermal_stress(after.theta, tilde);

  // mechanics
  TensorField de(after.eps_p.size());
  for (std::size_t q = 0; q < de.size(); ++q) de[q] = d_.apply(after.eps_p[q]);
  std::vector<double> rhs = stress_load(grid_, de);
  axpy(1.0, divergence_scalar_weighted_load(grid_, f), rhs);
  axpy(1.0, body_load(after.t), rhs);
  axpy(1.0 / dt(), elastic_.apply(before.u), rhs);
  elastic_.constrain(rhs);
  std::vector<double> res = visco_.apply(after.u);
  axpy(-1.0, rhs, res);
  const double mech = norm2(rhs) > 0.0 ? norm2(res) / norm2(rhs) : norm2(res);

  // plastic flow and stress cache
  const TensorField e = strain(grid_, after.u);
  double flow = 0.0;
  for (std::size_t q = 0; q < e.size(); ++q) {
    const SymTensor t = d_.apply(e[q] - after.eps_p[q]);
    const SymTensor inc = after.eps_p[q] - before.eps_p[q] - dt() * yosida(t, ys_, yp_);
    flow = std::max(flow, norm(inc));
  }

  // heat
  TensorField rate(after.eps_p.size());
  for (std::size_t q = 0; q < rate.size(); ++q) rate[q] = (after.eps_p[q] - before.eps_p[q]) / dt();
  std::vector<double> du(after.u);
  axpy(-1.0, before.u, du);
  QuadScalar div_rate = divergence(grid_, du);
  for (double& v : div_rate) v /= dt();
  const QuadScalar src = heat_source(f, div_rate, rate, elastic_stress(d_, e, after.eps_p));
  std::vector<double> hrhs = mass_.apply(before.theta);
  for (double& v : hrhs) v /= dt();
  axpy(1.0, scalar_source_load(grid_, src), hrhs);
  std::vector<double> hres = heat_.apply(after.theta);
  axpy(-1.0, hrhs, hres);
  // temperature error implied by the heat residual, in the Picard norm
  const double heat = norm2(hres) > 0.0 ? lr_norm(solve_spd(heat_, hres, {1e-12, solve_opts_.maxit, false}).x) : 0.0;

  return std::max({mech, flow, heat});
}

Trajectory run_simulation(const ModelConfig& cfg, const SnapshotSink& sink) {
  const CoupledSolver solver(cfg);
  Trajectory traj;
  traj.grid = solver.grid();
  traj.dt = solver.dt();
  const int n = solver.steps();
  traj.states.reserve(n + 1);
  traj.states.push_back(solver.initial_state());
  traj.theta_tilde.push_back(solver.theta_tilde(0));
  if (sink) sink(traj.states.back(), traj.theta_tilde.back(), 0);
  for (int step = 0; step < n; ++step) {
    StepInfo info;
    try {
      State next = solver.picard_step(traj.states.back(), step, &info);
      next.t = (step + 1) * solver.dt();
      traj.states.push_back(std::move(next));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "step " << step + 1 << " (t = " << (step + 1) * solver.dt() << "): " << e.what();
      throw SimulationError(os.str(), step + 1, std::make_shared<const Trajectory>(std::move(traj)));
    }
    traj.theta_tilde.push_back(solver.theta_tilde(step + 1));
    traj.steps.push_back(info);
    const int done = step + 1;
    if (sink && (done % cfg.output.every == 0 || done == n)) sink(traj.states.back(), traj.theta_tilde.back(), done);
  }
  return traj;
}

SweepResult lambda_sweep(const ModelConfig& cfg, const std::vector<double>& lambdas,
                         const std::function<void(const SweepMember&)>& on_member) {
  if (lambdas.empty()) throw std::invalid_argument("lambda_sweep: empty lambda list");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw std::invalid_argument("lambda_sweep: lambdas must be positive");
    if (i > 0 && lambdas[i] > lambdas[i - 1])
      throw std::invalid_argument("lambda_sweep: lambdas must be decreasing");
  }
  SweepResult res;
  const int n = cfg.steps();
  for (int s = 0; s <= n; ++s)
    if (s % cfg.output.every == 0 || s == n) res.output_steps.push_back(s);

  for (double lambda : lambdas) {
    SweepMember m;
    m.lambda = lambda;
    ModelConfig c = cfg;
    c.flow.lambda = lambda;
    try {
      m.trajectory = run_simulation(c);
      m.report = build_report(m.trajectory, c);
      m.ok = true;
    } catch (const std::exception& e) {
      m.error = e.what();
    }
    if (on_member) on_member(m);
    res.members.push_back(std::move(m));
  }

  const ElasticityTensor d(cfg.material.lame_first, cfg.material.lame_second);
  for (std::size_t p = 0; p + 1 < res.members.size(); ++p) {
    const auto& a = res.members[p];
    const auto& b = res.members[p + 1];
    std::vector<double> row;
    for (int s : res.output_steps) {
      if (!a.ok || !b.ok) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      row.push_back(cauchy_metric(a.trajectory.grid, a.trajectory.states[s].stress,
                                  b.trajectory.states[s].stress, d));
    }
    res.metrics.push_back(std::move(row));
  }
  return res;
}

}  // namespace thermoplast

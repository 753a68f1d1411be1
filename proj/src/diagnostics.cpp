#include "thermoplast/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thermoplast/fem.hpp"

namespace thermoplast {

namespace {

NodalScalar total_theta(const Trajectory& traj, std::size_t n) {
  NodalScalar th = traj.states[n].theta;
  const NodalScalar& tilde = traj.theta_tilde.at(n);
  for (std::size_t i = 0; i < th.size(); ++i) th[i] += tilde[i];
  return th;
}

double sq(double x) { return x * x; }

// Adds dt int of the tail integrand for every K to `acc`.
void accumulate_tail(const Grid& grid, const NodalScalar& theta, double dt, const std::vector<double>& K_list,
                     double C, std::vector<double>& acc) {
  const double wt = grid.quad_weight();
  const QuadScalar v = interpolate(grid, theta);
  const auto grad = gradient(grid, theta);
  for (std::size_t k = 0; k < K_list.size(); ++k) {
    const double K = K_list[k];
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double m = std::abs(v[i]);
      const double diff = std::clamp(m - K, 0.0, C);
      double val = diff * diff;
      if (m > K && m < K + C) val += sq(grad[i][0]) + sq(grad[i][1]);
      acc[k] += dt * wt * val;
    }
  }
}

}  // namespace

std::vector<EnergyRow> energy_report(const Trajectory& traj, double trunc_K) {
  const Grid& g = traj.grid;
  const double w = g.quad_weight();
  std::vector<EnergyRow> rows;
  rows.reserve(traj.states.size());
  double viscous = 0.0;
  double trunc = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const State& s = traj.states[n];
    EnergyRow r;
    for (const auto& t : s.stress) r.stress_energy += w * inner(t, t);
    const QuadScalar th = interpolate(g, s.theta);
    for (double v : th) r.theta_mass += w * std::abs(v);
    if (n > 0) {
      std::vector<double> du(s.u);
      const auto& prev = traj.states[n - 1].u;
      for (std::size_t i = 0; i < du.size(); ++i) du[i] = (du[i] - prev[i]) / traj.dt;
      for (const auto& e : strain(g, du)) viscous += traj.dt * w * inner(e, e);
      const auto grad = gradient(g, s.theta);
      for (std::size_t q = 0; q < th.size(); ++q)
        if (std::abs(th[q]) < trunc_K) trunc += traj.dt * w * (sq(grad[q][0]) + sq(grad[q][1]));
    }
    r.viscous_work = viscous;
    r.trunc_gradient = trunc;
    rows.push_back(r);
  }
  return rows;
}

std::vector<BalanceRow> m_lambda_balance(const Trajectory& traj, const ElasticityTensor& d,
                                         const YieldSurface& ys, const YosidaParam& yp) {
  const Grid& g = traj.grid;
  const double w = g.quad_weight();
  std::vector<BalanceRow> rows;
  double compliance = 0.0;
  double work = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const State& s = traj.states[n];
    BalanceRow r;
    for (const auto& t : s.stress) r.m_lambda += w * yosida_potential(t, ys, yp);
    if (n > 0) {
      const State& p = traj.states[n - 1];
      std::vector<double> du(s.u);
      for (std::size_t i = 0; i < du.size(); ++i) du[i] = (du[i] - p.u[i]) / traj.dt;
      const TensorField e = strain(g, du);
      for (std::size_t q = 0; q < s.stress.size(); ++q) {
        const SymTensor rate = (s.stress[q] - p.stress[q]) / traj.dt;
        compliance += traj.dt * w * inner(d.apply_inverse(rate), rate);
        work += traj.dt * w * inner(e[q], rate);
      }
    }
    r.compliance = compliance;
    r.work = work;
    r.residual = std::abs(r.m_lambda + r.compliance - r.work);
    const double scale = std::max({std::abs(r.m_lambda), std::abs(r.compliance), std::abs(r.work)});
    r.relative = scale > 0.0 ? r.residual / scale : 0.0;
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> stress_rate_norm(const Trajectory& traj) {
  const double w = traj.grid.quad_weight();
  std::vector<double> out;
  double acc = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (n > 0) {
      const auto& a = traj.states[n].stress;
      const auto& b = traj.states[n - 1].stress;
      for (std::size_t q = 0; q < a.size(); ++q) {
        const SymTensor rate = (a[q] - b[q]) / traj.dt;
        acc += traj.dt * w * inner(rate, rate);
      }
    }
    out.push_back(acc);
  }
  return out;
}

namespace {

void check_q(double q) {
  if (!(q >= 1.0 && q < 1.25)) throw std::invalid_argument("boccardo_norm: q must lie in [1, 5/4)");
}

double boccardo_increment(const Grid& g, const NodalScalar& theta, double q) {
  const double w = g.quad_weight();
  const QuadScalar v = interpolate(g, theta);
  const auto grad = gradient(g, theta);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    acc += w * (std::pow(std::abs(v[i]), q) + std::pow(std::hypot(grad[i][0], grad[i][1]), q));
  return acc;
}

}  // namespace

std::vector<double> boccardo_norm(const Trajectory& traj, double q) {
  check_q(q);
  std::vector<double> out;
  double acc = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (n > 0) acc += traj.dt * boccardo_increment(traj.grid, traj.states[n].theta, q);
    out.push_back(std::pow(acc, 1.0 / q));
  }
  return out;
}

double boccardo_norm(const Grid& grid, const std::vector<NodalScalar>& theta, double dt, double q) {
  check_q(q);
  double acc = 0.0;
  for (std::size_t n = 1; n < theta.size(); ++n) acc += dt * boccardo_increment(grid, theta[n], q);
  return std::pow(acc, 1.0 / q);
}

double cauchy_metric(const Grid& grid, std::span<const SymTensor> a, std::span<const SymTensor> b,
                     const ElasticityTensor& d) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != grid.quad_count())
    throw std::invalid_argument("cauchy_metric: fields do not live on the same grid");
  double acc = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    const SymTensor diff = a[q] - b[q];
    acc += inner(d.apply_inverse(diff), diff);
  }
  return grid.quad_weight() * acc;
}

double RenormBump::S(double r) const {
  const double a = 0.5 * M;
  const double m = std::abs(r);
  const double sgn = r < 0.0 ? -1.0 : 1.0;
  if (m <= a) return r + shift;
  if (m >= M) return sgn * 1.5 * a + shift;
  const double t = (m - a) / a;
  return sgn * (a + a * (t - t * t * t + 0.5 * t * t * t * t)) + shift;
}

double RenormBump::dS(double r) const {
  const double a = 0.5 * M;
  const double m = std::abs(r);
  if (m <= a) return 1.0;
  if (m >= M) return 0.0;
  const double t = (m - a) / a;
  return 1.0 - 3.0 * t * t + 2.0 * t * t * t;
}

double RenormBump::d2S(double r) const {
  const double a = 0.5 * M;
  const double m = std::abs(r);
  if (m <= a || m >= M) return 0.0;
  const double t = (m - a) / a;
  const double sgn = r < 0.0 ? -1.0 : 1.0;
  return -sgn * (6.0 * t - 6.0 * t * t) / a;
}

double renorm_test_function(double x, double y, double t, double lx, double ly, double t_end) {
  const double c = 1.0 - t / t_end;
  return (1.0 + 0.5 * sq(x / lx) + 0.25 * (y / ly)) * c * c;
}

void renorm_test_gradient(double x, double /*y*/, double t, double lx, double ly, double t_end, double& gx,
                          double& gy) {
  const double c = sq(1.0 - t / t_end);
  gx = x / (lx * lx) * c;
  gy = 0.25 / ly * c;
}

double RenormTerms::residual() const {
  const double lhs_time = time_term + initial_term;
  const double scale = std::max({std::abs(lhs_time), std::abs(diffusion), std::abs(curvature), std::abs(source)});
  const double r = std::abs(lhs_time + diffusion + curvature - source);
  return scale > 0.0 ? r / scale : 0.0;
}

namespace {

// Sub-cell rule for the renormalized integrals: every cell is split into
// kSub x kSub squares with 2x2 Gauss points each. S'' has kinks, so the plain
// 2x2 rule gives an erratic O(h^2) error on cells cut by its level sets.
constexpr int kSub = 4;

struct SubPoint {
  double xi;
  double eta;
};

std::vector<SubPoint> sub_points() {
  const double g = 0.5 / std::sqrt(3.0);
  std::vector<SubPoint> pts;
  for (int sj = 0; sj < kSub; ++sj)
    for (int si = 0; si < kSub; ++si)
      for (int q = 0; q < 4; ++q) {
        const double ox = (q % 2 == 0) ? 0.5 - g : 0.5 + g;
        const double oy = (q / 2 == 0) ? 0.5 - g : 0.5 + g;
        pts.push_back({(si + ox) / kSub, (sj + oy) / kSub});
      }
  return pts;
}

struct Local {
  double v;
  double gx;
  double gy;
};

Local eval_bilinear(const std::array<double, 4>& w, double xi, double eta, double h) {
  const double v = w[0] * (1 - xi) * (1 - eta) + w[1] * xi * (1 - eta) + w[2] * (1 - xi) * eta + w[3] * xi * eta;
  const double gx = ((w[1] - w[0]) * (1 - eta) + (w[3] - w[2]) * eta) / h;
  const double gy = ((w[2] - w[0]) * (1 - xi) + (w[3] - w[1]) * xi) / h;
  return {v, gx, gy};
}

std::array<double, 4> cell_values(const Grid& grid, const NodalScalar& w, int c) {
  const auto nodes = grid.cell_nodes(c);
  return {w[nodes[0]], w[nodes[1]], w[nodes[2]], w[nodes[3]]};
}

}  // namespace

RenormTerms renorm_terms(const Grid& grid, const std::vector<NodalScalar>& w, const std::vector<QuadScalar>& q,
                         double dt, const RenormBump& s) {
  if (w.size() < 2 || q.size() != w.size())
    throw std::invalid_argument("renorm_terms: need at least two levels and one source per level");
  const int nq = grid.quad_count();
  const double wt = grid.quad_weight();
  const double h = grid.h();
  const double sub_wt = grid.quad_weight() / (kSub * kSub);
  const double t_end = dt * static_cast<double>(w.size() - 1);
  const double lx = grid.lx();
  const double ly = grid.ly();
  const std::vector<SubPoint> local = sub_points();
  std::vector<Point2> qpts(nq);
  for (int i = 0; i < nq; ++i) qpts[i] = grid.quad_point(i);

  RenormTerms r;
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double t = dt * static_cast<double>(n);
    NodalScalar mid;
    if (n > 0) {
      // S', S'' at the step midpoint: the chain-rule defect of a step is then O(dt^3)
      mid.resize(w[n].size());
      for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (w[n][i] + w[n - 1][i]);
    }
    for (int c = 0; c < grid.cell_count(); ++c) {
      const auto nodes = grid.cell_nodes(c);
      const Point2 origin = grid.node_point(nodes[0]);
      const auto wc = cell_values(grid, w[n], c);
      std::array<double, 4> mc{};
      if (n > 0) mc = cell_values(grid, mid, c);
      for (const SubPoint& p : local) {
        const double x = origin.x + p.xi * h;
        const double y = origin.y + p.eta * h;
        const Local cur = eval_bilinear(wc, p.xi, p.eta, h);
        if (n == 0) r.initial_term -= sub_wt * s.S(cur.v) * renorm_test_function(x, y, 0.0, lx, ly, t_end);
        if (n + 1 < w.size()) {
          const double dphi = renorm_test_function(x, y, t + dt, lx, ly, t_end) -
                              renorm_test_function(x, y, t, lx, ly, t_end);
          r.time_term -= sub_wt * s.S(cur.v) * dphi;
        }
        if (n > 0) {
          const Local m = eval_bilinear(mc, p.xi, p.eta, h);
          const double phi = renorm_test_function(x, y, t, lx, ly, t_end);
          double gx = 0.0;
          double gy = 0.0;
          renorm_test_gradient(x, y, t, lx, ly, t_end, gx, gy);
          r.diffusion += dt * sub_wt * s.dS(m.v) * (cur.gx * gx + cur.gy * gy);
          r.curvature += dt * sub_wt * s.d2S(m.v) * (m.gx * cur.gx + m.gy * cur.gy) * phi;
        }
      }
    }
    if (n > 0) {
      // the source is only known at the solver's quadrature points
      const QuadScalar vm = interpolate(grid, mid);
      for (int i = 0; i < nq; ++i)
        r.source += dt * wt * q[n][i] * s.dS(vm[i]) * renorm_test_function(qpts[i].x, qpts[i].y, t, lx, ly, t_end);
    }
  }
  return r;
}

double renorm_residual(const Grid& grid, const std::vector<NodalScalar>& w, const std::vector<QuadScalar>& q,
                       double dt, const RenormBump& s) {
  return renorm_terms(grid, w, q, dt, s).residual();
}

std::vector<double> trunc_tail(const Grid& grid, const std::vector<NodalScalar>& theta, double dt,
                               const std::vector<double>& K_list, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("trunc_tail: C must be positive");
  for (std::size_t i = 1; i < K_list.size(); ++i)
    if (!(K_list[i] > K_list[i - 1])) throw std::invalid_argument("trunc_tail: K list must be ascending");
  std::vector<double> acc(K_list.size(), 0.0);
  for (std::size_t n = 1; n < theta.size(); ++n) accumulate_tail(grid, theta[n], dt, K_list, C, acc);
  for (double& a : acc) a = std::sqrt(a);
  return acc;
}

std::vector<double> trunc_tail(const Trajectory& traj, const std::vector<double>& K_list, double C) {
  std::vector<NodalScalar> theta;
  theta.reserve(traj.states.size());
  for (std::size_t n = 0; n < traj.states.size(); ++n) theta.push_back(total_theta(traj, n));
  return trunc_tail(traj.grid, theta, traj.dt, K_list, C);
}

double dissipation_min(const Trajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const auto& a = traj.states[n];
    const auto& b = traj.states[n - 1];
    for (std::size_t q = 0; q < a.eps_p.size(); ++q)
      m = std::min(m, inner((a.eps_p[q] - b.eps_p[q]) / traj.dt, a.stress[q]));
  }
  return traj.states.size() > 1 ? m : 0.0;
}

double plastic_trace_max(const Trajectory& traj) {
  double m = 0.0;
  for (const auto& s : traj.states)
    for (const auto& e : s.eps_p) m = std::max(m, std::abs(e.trace()));
  return m;
}

DiagnosticsReport build_report(const Trajectory& traj, const ModelConfig& cfg) {
  const ElasticityTensor d(cfg.material.lame_first, cfg.material.lame_second);
  const YieldSurface ys(cfg.flow.k);
  const YosidaParam yp(cfg.flow.lambda);
  const auto& dc = cfg.diagnostics;

  const auto energy = energy_report(traj, dc.trunc_K);
  const auto balance = m_lambda_balance(traj, d, ys, yp);
  const auto rate = stress_rate_norm(traj);
  const auto bocc = boccardo_norm(traj, dc.boccardo_q);

  std::vector<NodalScalar> total;
  for (std::size_t n = 0; n < traj.states.size(); ++n) total.push_back(total_theta(traj, n));

  DiagnosticsReport rep;
  rep.tail_K = dc.tail_K;
  rep.tail_C = dc.tail_C;
  rep.renorm_M = dc.renorm_M;
  rep.dissipation_min = dissipation_min(traj);
  rep.plastic_trace_max = plastic_trace_max(traj);

  std::vector<std::vector<double>> tails(traj.states.size());
  std::vector<double> acc(dc.tail_K.size(), 0.0);
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (n > 0) accumulate_tail(traj.grid, total[n], traj.dt, dc.tail_K, dc.tail_C, acc);
    for (double a : acc) tails[n].push_back(std::sqrt(a));
  }

  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    DiagnosticsRow r;
    r.step = static_cast<int>(n);
    r.t = traj.states[n].t;
    r.energy = energy[n];
    r.dissipation_min = n > 0 && n - 1 < traj.steps.size() ? traj.steps[n - 1].dissipation_min : 0.0;
    r.picard_iterations = n > 0 && n - 1 < traj.steps.size() ? traj.steps[n - 1].picard_iterations : 0;
    r.m_lambda_residual = balance[n].residual;
    r.m_lambda_relative = balance[n].relative;
    r.stress_rate_norm = rate[n];
    r.boccardo_norm = bocc[n];
    r.trunc_tail = tails[n];
    rep.m_lambda_max_relative = std::max(rep.m_lambda_max_relative, r.m_lambda_relative);
    rep.rows.push_back(std::move(r));
  }

  if (traj.states.size() >= 2) {
    std::vector<NodalScalar> w;
    std::vector<QuadScalar> q;
    for (const auto& s : traj.states) {
      w.push_back(s.theta);
      q.push_back(s.heat_source);
    }
    for (double m : dc.renorm_M) rep.renorm_residual.push_back(renorm_residual(traj.grid, w, q, traj.dt, {m, 0.0}));
  }
  return rep;
}

std::vector<SummaryCheck> summarize(const DiagnosticsReport& report, const ModelConfig& cfg) {
  const auto& dc = cfg.diagnostics;
  std::vector<SummaryCheck> out;
  out.push_back({"dissipation_min", report.dissipation_min, -dc.dissipation_tol,
                 report.dissipation_min >= -dc.dissipation_tol});
  out.push_back({"plastic_trace_max", report.plastic_trace_max, dc.trace_tol,
                 report.plastic_trace_max <= dc.trace_tol});
  out.push_back({"m_lambda_relative_max", report.m_lambda_max_relative, dc.m_balance_tol,
                 report.m_lambda_max_relative <= dc.m_balance_tol});
  if (!report.rows.empty()) {
    const auto& tail = report.rows.back().trunc_tail;
    bool mono = true;
    for (std::size_t k = 1; k < tail.size(); ++k) mono = mono && tail[k] <= tail[k - 1];
    out.push_back({"trunc_tail_nonincreasing", tail.empty() ? 0.0 : tail.front(), 0.0, mono});
  }
  return out;
}

}  // namespace thermoplast

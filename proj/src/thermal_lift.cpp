#include "thermoplast/thermal_lift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thermoplast/fem.hpp"

namespace thermoplast {

double BoundaryFluxSpec::evaluate(double x, double y, double t) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return value;
    case Kind::sin_time:
      return value * std::sin(omega * t);
    case Kind::x_linear:
      return value * x;
    case Kind::smooth:
      return value * (1.0 + 0.5 * std::sin(omega * t)) * std::cos(std::numbers::pi * x) *
             (1.0 + 0.25 * std::cos(std::numbers::pi * y));
  }
  return 0.0;
}

std::string to_string(BoundaryFluxSpec::Kind kind) {
  switch (kind) {
    case BoundaryFluxSpec::Kind::zero: return "zero";
    case BoundaryFluxSpec::Kind::constant: return "constant";
    case BoundaryFluxSpec::Kind::sin_time: return "sin_time";
    case BoundaryFluxSpec::Kind::x_linear: return "x_linear";
    case BoundaryFluxSpec::Kind::smooth: return "smooth";
  }
  return "zero";
}

bool parse_flux_kind(const std::string& name, BoundaryFluxSpec::Kind& out) {
  using K = BoundaryFluxSpec::Kind;
  for (K k : {K::zero, K::constant, K::sin_time, K::x_linear, K::smooth}) {
    if (to_string(k) == name) {
      out = k;
      return true;
    }
  }
  return false;
}

NeumannData::NeumannData(const Grid& grid, double sample_dt, std::vector<NodalScalar> samples)
    : grid_(grid), sample_dt_(sample_dt), samples_(std::move(samples)) {
  if (samples_.size() < 2) throw std::invalid_argument("neumann data: need at least two time samples");
  if (!(sample_dt > 0.0)) throw std::invalid_argument("neumann data: sample interval must be positive");
  for (auto& s : samples_) {
    if (static_cast<int>(s.size()) != grid.node_count()) {
      throw std::invalid_argument("neumann data: sample length does not match the grid");
    }
    for (int n = 0; n < grid.node_count(); ++n) {
      if (!std::isfinite(s[n])) throw std::invalid_argument("neumann data: non-finite sample");
      if (!grid.on_boundary(n)) s[n] = 0.0;
    }
  }
}

NeumannData NeumannData::from_spec(const Grid& grid, const BoundaryFluxSpec& spec, double t_end, double dt) {
  const int steps = std::max(1, static_cast<int>(std::lround(t_end / dt)));
  std::vector<NodalScalar> samples;
  samples.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    samples.push_back(sample_nodes(grid, [&](double x, double y) { return spec.evaluate(x, y, t); }));
  }
  return NeumannData(grid, dt, std::move(samples));
}

NeumannData NeumannData::scaled(double factor) const {
  auto s = samples_;
  for (auto& v : s) {
    for (double& x : v) x *= factor;
  }
  return NeumannData(grid_, sample_dt_, std::move(s));
}

NeumannData NeumannData::plus(const NeumannData& other) const {
  if (other.sample_count() != sample_count()) throw std::invalid_argument("neumann data: sample counts differ");
  auto s = samples_;
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t n = 0; n < s[k].size(); ++n) s[k][n] += other.samples_[k][n];
  }
  return NeumannData(grid_, sample_dt_, std::move(s));
}

LiftTrajectory solve_tilde_theta(const Grid& grid, const NeumannData& g, double t_end, double dt,
                                 const SolveOptions& opts) {
  const int steps = static_cast<int>(std::lround(t_end / dt));
  if (steps < 1 || std::abs(steps * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw std::invalid_argument("thermal lift: dt must divide t_end");
  }
  const double ratio = dt / g.sample_dt();
  const int stride = static_cast<int>(std::lround(ratio));
  if (stride < 1 || std::abs(stride - ratio) > 1e-9 || (g.sample_count() - 1) < steps * stride) {
    throw std::invalid_argument("thermal lift: boundary data does not cover the time horizon on the step grid");
  }

  const LinearOperator mass = assemble_mass(grid);
  const LinearOperator stiff = assemble_laplacian_neumann(grid);
  const LinearOperator system = LinearOperator::combine(1.0 / dt, mass, 1.0, stiff);

  LiftTrajectory out;
  out.dt = dt;
  out.theta.reserve(steps + 1);
  out.theta.emplace_back(grid.node_count(), 0.0);
  for (int n = 0; n < steps; ++n) {
    const NodalScalar& prev = out.theta.back();
    std::vector<double> rhs = mass.apply(prev);
    const auto flux = boundary_flux_load(grid, g.sample((n + 1) * stride));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = rhs[i] / dt + flux[i];
    out.theta.push_back(solve_spd(system, rhs, opts, prev).x);
  }
  return out;
}

namespace {

// int_{boundary} g^2 for nodal boundary values, exact for the linear interpolant.
double boundary_l2_squared(const Grid& grid, const NodalScalar& g) {
  double s = 0.0;
  for (const auto& e : grid.boundary_edges()) {
    const double a = g[e[0]];
    const double b = g[e[1]];
    s += grid.h() / 3.0 * (a * a + a * b + b * b);
  }
  return s;
}

}  // namespace

LiftEstimate lift_estimate_report(const Grid& grid, const LiftTrajectory& trajectory, const NeumannData& g) {
  const LinearOperator mass = assemble_mass(grid);
  const LinearOperator stiff = assemble_laplacian_neumann(grid);
  const double dt = trajectory.dt;
  LiftEstimate est;

  double rate_sq = 0.0;
  for (std::size_t n = 0; n < trajectory.theta.size(); ++n) {
    const auto& th = trajectory.theta[n];
    const double h1 = mass.quadratic_form(th) + stiff.quadratic_form(th);
    est.state_linf_h1 = std::max(est.state_linf_h1, std::sqrt(std::max(h1, 0.0)));
    if (n == 0) continue;
    std::vector<double> diff(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) diff[i] = (th[i] - trajectory.theta[n - 1][i]) / dt;
    rate_sq += dt * mass.quadratic_form(diff);
  }
  est.rate_l2l2 = std::sqrt(rate_sq);

  const int steps = static_cast<int>(trajectory.theta.size()) - 1;
  const int stride = static_cast<int>(std::lround(dt / g.sample_dt()));
  double data_sq = 0.0;
  for (int n = 1; n <= steps; ++n) {
    const auto& cur = g.sample(n * stride);
    const auto& prev = g.sample((n - 1) * stride);
    NodalScalar rate(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) rate[i] = (cur[i] - prev[i]) / dt;
    data_sq += dt * (boundary_l2_squared(grid, cur) + boundary_l2_squared(grid, rate));
  }
  est.data_h1l2 = std::sqrt(data_sq);
  return est;
}

}  // namespace thermoplast

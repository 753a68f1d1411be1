#include "thermoplast/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "thermoplast/coupled_solver.hpp"
#include "thermoplast/fem.hpp"
#include "thermoplast/grid.hpp"
#include "thermoplast/sparse.hpp"
#include "thermoplast/thermal_lift.hpp"

namespace thermoplast {

namespace {

constexpr double pi = std::numbers::pi;

std::string worst(const char* what, double value) {
  std::ostringstream os;
  os.precision(3);
  os << what << " " << value;
  return os.str();
}

struct Worst {
  bool pass = true;
  std::string detail;
  double value = 0.0;
  void check(bool ok, const char* what, double v) {
    if (!ok && pass) {
      pass = false;
      detail = worst(what, v);
    }
  }
  SuiteResult result(const char* name, const char* summary) const {
    return {name, pass, pass ? worst(summary, value) : detail};
  }
};

std::vector<double> random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

SymTensor random_tensor(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymTensor t;
  t.xx = u(rng);
  t.yy = u(rng);
  t.zz = u(rng);
  t.xy = u(rng);
  t.xz = u(rng);
  t.yz = u(rng);
  return t;
}

SymTensor random_admissible(std::mt19937_64& rng, const YieldSurface& ys, double spherical_scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SymTensor dev = deviator(random_tensor(rng, 1.0));
  const double n = norm(dev);
  const double r = ys.k() * std::sqrt(u(rng));
  const SymTensor d = n > 0.0 ? (r / n) * dev : SymTensor{};
  return d + (spherical_scale * (2.0 * u(rng) - 1.0)) * SymTensor::identity();
}

SuiteResult check_tensor_algebra(std::mt19937_64& rng, int samples) {
  const ElasticityTensor d(1.5, 1.0);
  Worst w;
  for (int i = 0; i < samples; ++i) {
    const SymTensor a = random_tensor(rng, 3.0);
    const SymTensor b = random_tensor(rng, 3.0);
    const SymTensor pa = deviator(a);
    w.check(std::abs(pa.trace()) <= 1e-14, "trace of deviator", pa.trace());
    w.check(norm(deviator(pa) - pa) <= 1e-14, "idempotence", norm(deviator(pa) - pa));
    w.check(std::abs(inner(pa, SymTensor::identity())) <= 1e-13, "orthogonality", inner(pa, SymTensor::identity()));
    const double pos = inner(d.apply(a), a) - d.coercivity() * inner(a, a);
    w.check(pos >= -1e-12 * inner(a, a), "coercivity", pos);
    const double lhs = inner(d.apply(a), b);
    const double rhs = inner(a, d.apply(b));
    const double sym = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    w.check(sym <= 1e-12, "D symmetry", sym);
    const double inv = norm(d.apply_inverse(d.apply(a)) - a);
    w.check(inv <= 1e-13 * std::max(1.0, norm(a)), "inverse", inv);
    w.value = std::max(w.value, inv);
  }
  return w.result("tensor_algebra", "max inverse error");
}

SuiteResult check_yosida_identities(std::mt19937_64& rng, int samples, const YieldSurface& ys,
                                    const YosidaParam& yp) {
  Worst w;
  const double lip = 1.0 / (2.0 * yp.lambda());
  for (int i = 0; i < samples; ++i) {
    const SymTensor a = random_tensor(rng, 3.0 * ys.k());
    const SymTensor b = random_tensor(rng, 3.0 * ys.k());
    const SymTensor ya = yosida(a, ys, yp);
    const SymTensor yb = yosida(b, ys, yp);
    const double res = norm(ya - (a - project_K(a, ys)) / (2.0 * yp.lambda()));
    w.check(res <= 1e-12, "resolvent identity", res);
    w.value = std::max(w.value, res);
    const double l = norm(ya - yb);
    w.check(l <= lip * norm(a - b) * (1.0 + 1e-10), "Lipschitz bound", l / std::max(norm(a - b), 1e-300));
    w.check(std::abs(ya.trace()) <= 1e-14, "trace", ya.trace());
    const double r = norm(deviator(a));
    const double closed = std::max(r - ys.k(), 0.0) * r / (2.0 * yp.lambda());
    const double dis = inner(ya, a);
    w.check(dis >= 0.0 && std::abs(dis - closed) <= 1e-12 * std::max(1.0, closed), "dissipation", dis - closed);
    w.check(in_K(a, ys) == (norm(ya) == 0.0), "zero set", norm(ya));
  }
  return w.result("yosida_identities", "max resolvent error");
}

SuiteResult check_monotone(const TensorMap& y, std::mt19937_64& rng, int samples, double scale) {
  Worst w;
  w.value = 0.0;
  for (int i = 0; i < samples; ++i) {
    const SymTensor a = random_tensor(rng, scale);
    const SymTensor b = random_tensor(rng, scale);
    const double m = inner(y(a) - y(b), a - b);
    w.check(m >= -1e-12, "monotonicity", m);
    w.value = std::min(w.value, m);
  }
  return w.result("yosida_monotone", "min pairing");
}

SuiteResult check_projection(std::mt19937_64& rng, int samples, const YieldSurface& ys) {
  Worst w;
  for (int i = 0; i < samples; ++i) {
    const SymTensor t = random_tensor(rng, 3.0 * ys.k());
    const SymTensor p = project_K(t, ys);
    w.check(norm(deviator(p)) <= ys.k() * (1.0 + 1e-14), "admissibility", norm(deviator(p)));
    w.check(std::abs(p.trace() - t.trace()) <= 1e-14 * std::max(1.0, std::abs(t.trace())), "spherical part",
            p.trace() - t.trace());
    for (int j = 0; j < 20; ++j) {
      const SymTensor z = random_admissible(rng, ys, 3.0 * ys.k());
      const double vi = inner(t - p, z - p);
      w.check(vi <= 1e-13, "variational inequality", vi);
      w.check(norm(t - p) <= norm(t - z) + 1e-13, "nearest point", norm(t - p) - norm(t - z));
      w.value = std::max(w.value, vi);
    }
    const SymTensor s = random_tensor(rng, 3.0 * ys.k());
    const double ne = norm(project_K(t, ys) - project_K(s, ys)) - norm(t - s);
    w.check(ne <= 1e-12, "nonexpansive", ne);
  }
  return w.result("projection", "max variational pairing");
}

SuiteResult check_truncation(std::mt19937_64& rng, int samples) {
  Worst w;
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> uk(0.1, 10.0);
  for (int i = 0; i < samples; ++i) {
    const double r = u(rng);
    const double s = u(rng);
    const double k = uk(rng);
    const double tr = truncate(r, k);
    w.check(std::abs(tr) <= k, "bound", tr);
    w.check(std::abs(r) > k || tr == r, "interior identity", tr - r);
    w.check(std::abs(truncate(r, k) - truncate(s, k)) <= std::abs(r - s), "Lipschitz", tr);
    w.check((r <= s) == (truncate(r, k) <= truncate(s, k)) || truncate(r, k) == truncate(s, k), "monotone", r);
    w.check(phi(-r, k) == phi(r, k), "evenness", r);
    const double step = 1e-4;
    if (std::abs(std::abs(r) - k) > 10 * step) {
      const double fd = (phi(r + step, k) - phi(r - step, k)) / (2.0 * step);
      w.check(std::abs(fd - tr) <= 1e-6, "phi' = T_K", fd - tr);
      w.value = std::max(w.value, std::abs(fd - tr));
    }
  }
  return w.result("truncation", "max derivative mismatch");
}

SuiteResult check_assembly(std::mt19937_64& rng) {
  Worst w;
  const Grid g(6, 4, 1.5, 1.0);
  const ElasticityTensor d(1.5, 1.0);
  const LinearOperator a = assemble_elasticity(g, d, false);
  const LinearOperator l = assemble_laplacian_neumann(g);
  const LinearOperator m = assemble_mass(g);
  w.check(a.matrix.asymmetry() <= 1e-12, "elasticity symmetry", a.matrix.asymmetry());
  w.check(l.matrix.asymmetry() <= 1e-12, "laplacian symmetry", l.matrix.asymmetry());
  w.check(m.matrix.asymmetry() <= 1e-12, "mass symmetry", m.matrix.asymmetry());
  double total = 0.0;
  for (double v : m.matrix.val) total += v;
  w.check(std::abs(total - g.area()) <= 1e-12, "mass total", total - g.area());
  const std::vector<double> ones(g.node_count(), 1.0);
  w.check(norm2(l.apply(ones)) <= 1e-12, "Neumann kernel", norm2(l.apply(ones)));
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_vector(rng, 2 * g.node_count());
    double oracle = 0.0;
    for (const auto& e : strain(g, u)) oracle += g.quad_weight() * inner(d.apply(e), e);
    const double qf = a.quadratic_form(u);
    w.check(std::abs(qf - oracle) <= 1e-10 * std::max(1.0, oracle), "elastic quadratic form", qf - oracle);
    const auto th = random_vector(rng, g.node_count());
    double lo = 0.0;
    for (const auto& gr : gradient(g, th)) lo += g.quad_weight() * (gr[0] * gr[0] + gr[1] * gr[1]);
    w.check(std::abs(l.quadratic_form(th) - lo) <= 1e-10 * std::max(1.0, lo), "laplacian quadratic form",
            l.quadratic_form(th) - lo);
    const auto s = random_vector(rng, g.quad_count());
    const auto load = divergence_scalar_weighted_load(g, s);
    const double lhs = dot(load, u);
    const QuadScalar div = divergence(g, u);
    double rhs = 0.0;
    for (int q = 0; q < g.quad_count(); ++q) rhs += g.quad_weight() * s[q] * div[q];
    w.check(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)), "divergence load", lhs - rhs);
    w.value = std::max(w.value, std::abs(qf - oracle));
  }
  return w.result("assembly", "max quadratic form error");
}

SuiteResult check_lift(std::mt19937_64& rng) {
  Worst w;
  const Grid g = Grid::unit_square(8);
  const double dt = 0.01;
  const double t_end = 0.1;
  std::uniform_real_distribution<double> u(0.5, 2.0);
  BoundaryFluxSpec a{BoundaryFluxSpec::Kind::constant, u(rng), 1.0};
  BoundaryFluxSpec b{BoundaryFluxSpec::Kind::sin_time, u(rng), 3.0};
  const NeumannData ga = NeumannData::from_spec(g, a, t_end, dt);
  const NeumannData gb = NeumannData::from_spec(g, b, t_end, dt);
  const SolveOptions opts{1e-13, 10000, false};
  const auto ta = solve_tilde_theta(g, ga, t_end, dt, opts);
  const auto tb = solve_tilde_theta(g, gb, t_end, dt, opts);
  const auto tab = solve_tilde_theta(g, ga.plus(gb), t_end, dt, opts);
  for (std::size_t n = 0; n < tab.theta.size(); ++n)
    for (std::size_t i = 0; i < tab.theta[n].size(); ++i) {
      const double e = std::abs(tab.theta[n][i] - ta.theta[n][i] - tb.theta[n][i]);
      w.check(e <= 1e-10, "linearity", e);
      w.value = std::max(w.value, e);
    }
  for (std::size_t n = 0; n < ta.theta.size(); ++n) {
    const double mass = integrate(g, interpolate(g, ta.theta[n]));
    const double expect = a.value * g.perimeter() * dt * static_cast<double>(n);
    w.check(std::abs(mass - expect) <= 1e-8 * std::max(1.0, expect), "heat content", mass - expect);
  }
  return w.result("boundary_lift", "max superposition error");
}

SuiteResult check_manufactured() {
  const ConvergenceStudy e = elasticity_study({8, 16, 32});
  const ConvergenceStudy l = laplacian_study({8, 16, 32});
  const ConvergenceStudy h = heat_study({8, 16, 32});
  const double worst_order = std::min({e.min_order(), l.min_order(), h.min_order()});
  const double lin = mms_linear_displacement_error(8);
  SuiteResult r{"manufactured", worst_order >= 1.8 && lin <= 1e-10, worst("min observed order", worst_order)};
  return r;
}

std::vector<SuiteResult> run_property_suites(unsigned seed) {
  std::mt19937_64 rng(seed);
  const YieldSurface ys(1.0);
  const YosidaParam yp(0.05);
  std::vector<SuiteResult> out;
  out.push_back(check_tensor_algebra(rng, 10000));
  out.push_back(check_yosida_identities(rng, 10000, ys, yp));
  out.push_back(check_monotone([&](const SymTensor& t) { return yosida(t, ys, yp); }, rng, 10000, 3.0));
  out.push_back(check_projection(rng, 500, ys));
  out.push_back(check_truncation(rng, 10000));
  out.push_back(check_assembly(rng));
  out.push_back(check_lift(rng));
  out.push_back(check_manufactured());
  return out;
}

std::vector<double> ConvergenceStudy::orders() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < error.size(); ++i)
    out.push_back(std::log(error[i - 1] / error[i]) / std::log(static_cast<double>(n[i]) / n[i - 1]));
  return out;
}

double ConvergenceStudy::min_order() const {
  const auto o = orders();
  return o.empty() ? 0.0 : *std::min_element(o.begin(), o.end());
}

namespace {

double l2_error(const Grid& g, std::span<const double> nodal, const std::function<double(double, double)>& exact) {
  const QuadScalar v = interpolate(g, nodal);
  double acc = 0.0;
  for (int q = 0; q < g.quad_count(); ++q) {
    const Point2 p = g.quad_point(q);
    const double e = v[q] - exact(p.x, p.y);
    acc += g.quad_weight() * e * e;
  }
  return std::sqrt(acc);
}

std::vector<double> component(std::span<const double> u, int c) {
  std::vector<double> out(u.size() / 2);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = u[2 * n + c];
  return out;
}

}  // namespace

double mms_elasticity_error(int n, double lame_first, double lame_second) {
  const Grid g = Grid::unit_square(n);
  const ElasticityTensor d(lame_first, lame_second);
  const double mu = lame_second;
  const double lam = lame_first;
  std::vector<double> f(2 * g.quad_count());
  for (int q = 0; q < g.quad_count(); ++q) {
    const Point2 p = g.quad_point(q);
    f[2 * q] = (3.0 * mu + lam) * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y);
    f[2 * q + 1] = -(mu + lam) * pi * pi * std::cos(pi * p.x) * std::cos(pi * p.y);
  }
  const LinearOperator a = assemble_elasticity(g, d);
  std::vector<double> rhs = body_force_load(g, f);
  a.constrain(rhs);
  const auto u = solve_spd(a, rhs, {1e-12, 20000, false}).x;
  const double ex = l2_error(g, component(u, 0), [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  const double ey = l2_error(g, component(u, 1), [](double, double) { return 0.0; });
  return std::hypot(ex, ey);
}

double mms_linear_displacement_error(int n) {
  const Grid g = Grid::unit_square(n);
  const ElasticityTensor d(1.5, 1.0);
  auto ux = [](double x, double y) { return 0.3 * x - 0.2 * y + 0.1; };
  auto uy = [](double x, double y) { return 0.5 * x + 0.4 * y - 0.2; };
  const LinearOperator full = assemble_elasticity(g, d, false);
  std::vector<double> ub(2 * g.node_count(), 0.0);
  std::vector<char> mask(2 * g.node_count(), 0);
  for (int i = 0; i < g.node_count(); ++i) {
    if (!g.on_boundary(i)) continue;
    const Point2 p = g.node_point(i);
    ub[2 * i] = ux(p.x, p.y);
    ub[2 * i + 1] = uy(p.x, p.y);
    mask[2 * i] = mask[2 * i + 1] = 1;
  }
  std::vector<double> rhs = full.apply(ub);
  for (double& v : rhs) v = -v;
  const LinearOperator a = eliminate_dirichlet(full.matrix, mask);
  a.constrain(rhs);
  auto u = solve_spd(a, rhs, {1e-14, 20000, false}).x;
  double err = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const Point2 p = g.node_point(i);
    err = std::max(err, std::abs(u[2 * i] + ub[2 * i] - ux(p.x, p.y)));
    err = std::max(err, std::abs(u[2 * i + 1] + ub[2 * i + 1] - uy(p.x, p.y)));
  }
  return err;
}

double mms_laplacian_error(int n) {
  const Grid g = Grid::unit_square(n);
  const LinearOperator k = assemble_laplacian_neumann(g);
  const LinearOperator m = assemble_mass(g);
  const QuadScalar src = sample_quad(g, [](double x, double y) { return 2 * pi * pi * std::cos(pi * x) * std::cos(pi * y); });
  std::vector<double> rhs = scalar_source_load(g, src);
  // restore exact compatibility with the constant kernel
  double total = 0.0;
  for (double v : rhs) total += v;
  const std::vector<double> ones(g.node_count(), 1.0);
  const std::vector<double> mass_ones = m.apply(ones);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= total * mass_ones[i] / g.area();
  std::vector<double> u = solve_spd(k, rhs, {1e-12, 20000, false}).x;
  const double mean = dot(mass_ones, u) / g.area();
  for (double& v : u) v -= mean;
  return l2_error(g, u, [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); });
}

double mms_heat_error(int n, double dt, double t_end) {
  ModelConfig cfg;
  cfg.scenario = "custom";
  cfg.grid = {n, n, 1.0, 1.0};
  cfg.flow.f.kind = ThermalStressFunction::Kind::zero;
  cfg.flow.lambda = std::max(dt, cfg.flow.lambda);
  cfg.time.dt = dt;
  cfg.time.t_end = t_end;
  cfg.solver.cg_tol = 1e-12;
  const CoupledSolver solver(cfg);
  const Grid& g = solver.grid();
  auto exact = [](double x, double y, double t) { return (1.0 + t) * std::cos(pi * x) * std::cos(pi * y); };
  NodalScalar theta = sample_nodes(g, [&](double x, double y) { return exact(x, y, 0.0); });
  for (int s = 1; s <= solver.steps(); ++s) {
    const double t = s * dt;
    const QuadScalar src = sample_quad(g, [&](double x, double y) {
      return std::cos(pi * x) * std::cos(pi * y) * (1.0 + 2.0 * pi * pi * (1.0 + t));
    });
    theta = solver.heat_step_with_source(theta, src);
  }
  return l2_error(g, theta, [&](double x, double y) { return exact(x, y, solver.steps() * dt); });
}

ConvergenceStudy elasticity_study(const std::vector<int>& ns) {
  ConvergenceStudy s{"elasticity", ns, {}};
  for (int n : ns) s.error.push_back(mms_elasticity_error(n));
  return s;
}

ConvergenceStudy laplacian_study(const std::vector<int>& ns) {
  ConvergenceStudy s{"neumann_laplacian", ns, {}};
  for (int n : ns) s.error.push_back(mms_laplacian_error(n));
  return s;
}

ConvergenceStudy heat_study(const std::vector<int>& ns, double dt, double t_end) {
  ConvergenceStudy s{"heat_step", ns, {}};
  for (int n : ns) s.error.push_back(mms_heat_error(n, dt, t_end));
  return s;
}

}  // namespace thermoplast

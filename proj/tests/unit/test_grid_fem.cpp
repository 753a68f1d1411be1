#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thermoplast/fem.hpp"
#include "thermoplast/grid.hpp"
#include "thermoplast/sparse.hpp"
#include "thermoplast/verification.hpp"

using namespace thermoplast;

namespace {

// Bilinear shape data at a quadrature point, rebuilt from its physical
// coordinates: values and physical derivatives for the local order
// (i, j), (i+1, j), (i, j+1), (i+1, j+1).
struct PointShape {
  std::array<int, 4> nodes{};
  std::array<double, 4> n{}, dx{}, dy{};
};

PointShape shape_at(const Grid& g, int q) {
  const int c = q / 4;
  const int ci = c % g.nx(), cj = c / g.nx();
  const Point2 p = g.quad_point(q);
  const double h = g.h();
  const double xi = (p.x - ci * h) / h, eta = (p.y - cj * h) / h;
  PointShape s;
  s.nodes = {g.node(ci, cj), g.node(ci + 1, cj), g.node(ci, cj + 1), g.node(ci + 1, cj + 1)};
  s.n = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
  s.dx = {-(1 - eta) / h, (1 - eta) / h, -eta / h, eta / h};
  s.dy = {-(1 - xi) / h, -xi / h, (1 - xi) / h, xi / h};
  return s;
}

SymTensor oracle_strain(const Grid& g, const std::vector<double>& u, int q) {
  const PointShape s = shape_at(g, q);
  SymTensor e;
  double uxy = 0, uyx = 0;
  for (int a = 0; a < 4; ++a) {
    const double ux = u[2 * s.nodes[a]], uy = u[2 * s.nodes[a] + 1];
    e.xx += ux * s.dx[a];
    e.yy += uy * s.dy[a];
    uxy += ux * s.dy[a];
    uyx += uy * s.dx[a];
  }
  e.xy = 0.5 * (uxy + uyx);
  return e;
}

std::vector<double> random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Eigen::MatrixXd dense(const CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int k = m.row_start[i]; k < m.row_start[i + 1]; ++k) d(i, m.col[k]) = m.val[k];
  return d;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const Grid g(4, 2, 2.0, 1.0);
  CHECK(g.node_count() == 15);
  CHECK(g.quad_count() == 32);
  CHECK(g.h() == 0.5);
  CHECK(g.boundary_edges().size() == 12);
  CHECK(g.on_boundary(g.node(0, 1)));
  CHECK_FALSE(g.on_boundary(g.node(1, 1)));
  CHECK_THROWS(Grid(4, 4, 2.0, 1.0));
  CHECK_THROWS(Grid(1, 1, 1.0, 1.0));
}

TEST_CASE("assembled operators are symmetric and deterministic") {
  const Grid g(6, 4, 1.5, 1.0);
  const ElasticityTensor d(1.5, 1.0);
  for (const LinearOperator& op : {assemble_elasticity(g, d), assemble_elasticity(g, d, false),
                                   assemble_laplacian_neumann(g), assemble_mass(g)})
    CHECK(op.matrix.asymmetry() <= 1e-12);
  CHECK(assemble_elasticity(g, d).matrix.val == assemble_elasticity(g, d).matrix.val);
}

TEST_CASE("elasticity operator: examples and quadrature oracle") {
  const Grid g(5, 5, 1.0, 1.0);
  const ElasticityTensor d(1.5, 1.0);
  const LinearOperator a = assemble_elasticity(g, d);
  const LinearOperator a_free = assemble_elasticity(g, d, false);
  const std::vector<double> zero(2 * g.node_count(), 0.0);
  CHECK(norm2(a.apply(zero)) == 0.0);

  // rigid translation on interior dofs only
  std::vector<double> t(2 * g.node_count(), 0.0);
  for (int n = 0; n < g.node_count(); ++n)
    if (!g.on_boundary(n)) t[2 * n] = 1.0;
  CHECK(norm2(a.apply(t)) > 0.0);
  CHECK(a.quadratic_form(t) > 0.0);

  std::mt19937_64 rng(21);
  for (int r = 0; r < 5; ++r) {
    const std::vector<double> u = random_vector(rng, 2 * g.node_count());
    double oracle = 0.0;
    for (int q = 0; q < g.quad_count(); ++q) {
      const SymTensor e = oracle_strain(g, u, q);
      oracle += inner(apply_D(d, e), e) * g.quad_weight();
    }
    CHECK(a_free.quadratic_form(u) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("elasticity operator is positive definite after elimination") {
  const Grid g(4, 4, 1.0, 1.0);
  const LinearOperator a = assemble_elasticity(g, ElasticityTensor(1.5, 1.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a.matrix));
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  std::mt19937_64 rng(22);
  for (int r = 0; r < 50; ++r) {
    std::vector<double> v = random_vector(rng, a.size());
    const double rq = a.quadratic_form(v) / dot(v, v);
    CHECK(rq >= es.eigenvalues().minCoeff() * (1 - 1e-12));
  }
}

TEST_CASE("Neumann Laplacian: kernel, row sums, quadrature oracle") {
  const Grid g(6, 3, 2.0, 1.0);
  const LinearOperator l = assemble_laplacian_neumann(g);
  const std::vector<double> c(g.node_count(), 3.7);
  for (double v : l.apply(c)) CHECK(std::abs(v) <= 1e-12);
  for (int i = 0; i < l.size(); ++i) {
    double s = 0.0;
    for (int k = l.matrix.row_start[i]; k < l.matrix.row_start[i + 1]; ++k) s += l.matrix.val[k];
    CHECK(std::abs(s) <= 1e-13);
  }
  std::mt19937_64 rng(23);
  for (int r = 0; r < 5; ++r) {
    const std::vector<double> v = random_vector(rng, g.node_count());
    double oracle = 0.0;
    for (int q = 0; q < g.quad_count(); ++q) {
      const PointShape s = shape_at(g, q);
      double gx = 0, gy = 0;
      for (int a = 0; a < 4; ++a) {
        gx += v[s.nodes[a]] * s.dx[a];
        gy += v[s.nodes[a]] * s.dy[a];
      }
      oracle += (gx * gx + gy * gy) * g.quad_weight();
    }
    CHECK(l.quadratic_form(v) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("mass matrix: total, positivity, hat function") {
  const Grid g(6, 4, 1.5, 1.0);
  const LinearOperator m = assemble_mass(g);
  double total = 0.0;
  for (double v : m.matrix.val) total += v;
  CHECK(total == doctest::Approx(g.area()).epsilon(1e-12));
  std::mt19937_64 rng(24);
  for (int r = 0; r < 100; ++r) CHECK(m.quadratic_form(random_vector(rng, g.node_count())) > 0.0);
  // interior hat: its integral is h^2 and its square integrates to (2h/3)^2
  const int n = g.node(2, 2);
  const double h = g.h();
  double row = 0.0;
  for (int k = m.matrix.row_start[n]; k < m.matrix.row_start[n + 1]; ++k) row += m.matrix.val[k];
  CHECK(row == doctest::Approx(h * h).epsilon(1e-12));
  CHECK(m.matrix.at(n, n) == doctest::Approx(4.0 * h * h / 9.0).epsilon(1e-12));
}

TEST_CASE("solve_spd contract") {
  const Grid g(8, 8, 1.0, 1.0);
  const LinearOperator a = assemble_elasticity(g, ElasticityTensor(1.5, 1.0));
  const SolveOptions opts{1e-12, 10000, false};
  const std::vector<double> zero(a.size(), 0.0);
  const SolveResult z = solve_spd(a, zero, opts);
  for (double v : z.x) CHECK(v == 0.0);

  std::mt19937_64 rng(25);
  std::vector<double> x = random_vector(rng, a.size());
  a.constrain(x);
  const std::vector<double> b = a.apply(x);
  for (bool jacobi : {false, true}) {
    const SolveResult r = solve_spd(a, b, {1e-12, 10000, jacobi});
    CHECK(r.residual <= 1e-12 * norm2(b));
    double err = 0.0;
    for (int i = 0; i < a.size(); ++i) err = std::max(err, std::abs(r.x[i] - x[i]));
    CHECK(err < 1e-8);
  }
  CHECK(solve_spd(a, b, opts).x == solve_spd(a, b, opts).x);

  TripletBuilder id(5);
  for (int i = 0; i < 5; ++i) id.add(i, i, 1.0);
  const LinearOperator eye{id.build(), {}};
  const std::vector<double> rhs{1, -2, 3, 0.5, 7};
  const SolveResult e = solve_spd(eye, rhs, opts);
  for (int i = 0; i < 5; ++i) CHECK(e.x[i] == doctest::Approx(rhs[i]));

  CHECK_THROWS_AS(solve_spd(a, b, {1e-14, 2, false}), SolverError);
  try {
    solve_spd(a, b, {1e-14, 2, false});
  } catch (const SolverError& err) {
    CHECK(err.residual() > 0.0);
    CHECK(err.iterations() == 2);
  }
}

TEST_CASE("strain examples") {
  const Grid g(4, 4, 1.0, 1.0);
  auto field = [&](auto fx, auto fy) {
    std::vector<double> u(2 * g.node_count());
    for (int n = 0; n < g.node_count(); ++n) {
      const Point2 p = g.node_point(n);
      u[2 * n] = fx(p.x, p.y);
      u[2 * n + 1] = fy(p.x, p.y);
    }
    return u;
  };
  for (const SymTensor& e : strain(g, field([](double, double) { return 2.0; }, [](double, double) { return -1.0; })))
    CHECK(norm(e) <= 1e-14);
  for (const SymTensor& e : strain(g, field([](double x, double) { return x; }, [](double, double) { return 0.0; }))) {
    CHECK(e.xx == doctest::Approx(1.0));
    CHECK(std::abs(e.yy) + std::abs(e.zz) + std::abs(e.xy) + std::abs(e.xz) + std::abs(e.yz) <= 1e-13);
  }
  for (const SymTensor& e : strain(g, field([](double, double y) { return y; }, [](double x, double) { return x; }))) {
    CHECK(e.xy == doctest::Approx(1.0));
    CHECK(std::abs(e.xx) + std::abs(e.yy) + std::abs(e.zz) <= 1e-13);
  }
  std::mt19937_64 rng(26);
  const std::vector<double> u = random_vector(rng, 2 * g.node_count());
  const TensorField e = strain(g, u);
  const QuadScalar div = divergence(g, u);
  for (int q = 0; q < g.quad_count(); ++q) {
    const SymTensor o = oracle_strain(g, u, q);
    CHECK(norm(e[q] - o) <= 1e-12);
    CHECK(div[q] == doctest::Approx(o.trace()).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("divergence-weighted load") {
  const Grid g(6, 6, 1.0, 1.0);
  const std::vector<double> zero(g.quad_count(), 0.0);
  for (double v : divergence_scalar_weighted_load(g, zero)) CHECK(v == 0.0);
  const std::vector<double> c(g.quad_count(), 2.5);
  const std::vector<double> lc = divergence_scalar_weighted_load(g, c);
  for (int n = 0; n < g.node_count(); ++n)
    if (!g.on_boundary(n)) {
      CHECK(std::abs(lc[2 * n]) <= 1e-13);
      CHECK(std::abs(lc[2 * n + 1]) <= 1e-13);
    }
  std::mt19937_64 rng(27);
  const std::vector<double> s = random_vector(rng, g.quad_count());
  const std::vector<double> v = random_vector(rng, 2 * g.node_count());
  const std::vector<double> load = divergence_scalar_weighted_load(g, s);
  double oracle = 0.0;
  for (int q = 0; q < g.quad_count(); ++q) oracle += s[q] * oracle_strain(g, v, q).trace() * g.quad_weight();
  CHECK(dot(load, v) == doctest::Approx(oracle).epsilon(1e-10));

  // stress_load agrees with the volumetric special case
  TensorField iso(g.quad_count());
  for (int q = 0; q < g.quad_count(); ++q) iso[q] = s[q] * SymTensor::identity();
  const std::vector<double> sl = stress_load(g, iso);
  for (std::size_t i = 0; i < sl.size(); ++i) CHECK(sl[i] == doctest::Approx(load[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("scalar loads and interpolation") {
  const Grid g(4, 4, 1.0, 1.0);
  const std::vector<double> one(g.quad_count(), 1.0);
  double total = 0.0;
  for (double v : scalar_source_load(g, one)) total += v;
  CHECK(total == doctest::Approx(g.area()));
  CHECK(integrate(g, one) == doctest::Approx(g.area()));
  std::vector<double> gb(g.node_count(), 0.0);
  for (int n = 0; n < g.node_count(); ++n)
    if (g.on_boundary(n)) gb[n] = 1.0;
  total = 0.0;
  for (double v : boundary_flux_load(g, gb)) total += v;
  CHECK(total == doctest::Approx(g.perimeter()));
  const NodalScalar lin = sample_nodes(g, [](double x, double y) { return 2 * x - y + 0.5; });
  const QuadScalar iv = interpolate(g, lin);
  const auto gr = gradient(g, lin);
  for (int q = 0; q < g.quad_count(); ++q) {
    const Point2 p = g.quad_point(q);
    CHECK(iv[q] == doctest::Approx(2 * p.x - p.y + 0.5));
    CHECK(gr[q][0] == doctest::Approx(2.0));
    CHECK(gr[q][1] == doctest::Approx(-1.0));
  }
}

TEST_CASE("manufactured solutions converge at second order") {
  const ConvergenceStudy el = elasticity_study({16, 32, 64});
  const ConvergenceStudy lap = laplacian_study({16, 32, 64});
  CHECK(el.min_order() >= 1.8);
  CHECK(lap.min_order() >= 1.8);
  for (int n : {4, 8, 16}) CHECK(mms_linear_displacement_error(n) < 1e-12);
}

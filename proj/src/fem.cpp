#include "thermoplast/fem.hpp"

#include <cmath>

namespace thermoplast {

namespace {

// Local element matrices are identical for every cell of a uniform grid.
std::array<std::array<double, 8>, 8> element_elasticity(const Q1Tables& t, double w, const ElasticityTensor& d) {
  std::array<std::array<double, 8>, 8> ke{};
  for (int q = 0; q < 4; ++q) {
    for (int a = 0; a < 8; ++a) {
      const int na = a / 2;
      SymTensor ea;
      if (a % 2 == 0) {
        ea.xx = t.dx[q][na];
        ea.xy = 0.5 * t.dy[q][na];
      } else {
        ea.yy = t.dy[q][na];
        ea.xy = 0.5 * t.dx[q][na];
      }
      const SymTensor sa = d.apply(ea);
      for (int b = 0; b < 8; ++b) {
        const int nb = b / 2;
        SymTensor eb;
        if (b % 2 == 0) {
          eb.xx = t.dx[q][nb];
          eb.xy = 0.5 * t.dy[q][nb];
        } else {
          eb.yy = t.dy[q][nb];
          eb.xy = 0.5 * t.dx[q][nb];
        }
        ke[a][b] += w * inner(sa, eb);
      }
    }
  }
  return ke;
}

}  // namespace

LinearOperator assemble_elasticity(const Grid& grid, const ElasticityTensor& d, bool dirichlet) {
  const Q1Tables t(grid.h());
  const auto ke = element_elasticity(t, grid.quad_weight(), d);
  const int ndof = 2 * grid.node_count();
  TripletBuilder builder(ndof);
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 8; ++a) {
      const int ia = 2 * nodes[a / 2] + a % 2;
      for (int b = 0; b < 8; ++b) builder.add(ia, 2 * nodes[b / 2] + b % 2, ke[a][b]);
    }
  }
  CsrMatrix m = builder.build();
  if (!dirichlet) return {std::move(m), {}};
  std::vector<char> mask(ndof, 0);
  for (int n = 0; n < grid.node_count(); ++n) {
    if (grid.on_boundary(n)) {
      mask[2 * n] = 1;
      mask[2 * n + 1] = 1;
    }
  }
  return eliminate_dirichlet(std::move(m), std::move(mask));
}

LinearOperator assemble_laplacian_neumann(const Grid& grid) {
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::array<std::array<double, 4>, 4> ke{};
  for (int q = 0; q < 4; ++q) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) ke[a][b] += w * (t.dx[q][a] * t.dx[q][b] + t.dy[q][a] * t.dy[q][b]);
    }
  }
  TripletBuilder builder(grid.node_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) builder.add(nodes[a], nodes[b], ke[a][b]);
    }
  }
  return {builder.build(), {}};
}

LinearOperator assemble_mass(const Grid& grid) {
  // 2x2 Gauss is exact for products of bilinears.
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::array<std::array<double, 4>, 4> me{};
  for (int q = 0; q < 4; ++q) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) me[a][b] += w * t.value[q][a] * t.value[q][b];
    }
  }
  TripletBuilder builder(grid.node_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) builder.add(nodes[a], nodes[b], me[a][b]);
    }
  }
  return {builder.build(), {}};
}

TensorField strain(const Grid& grid, std::span<const double> u) {
  const Q1Tables t(grid.h());
  TensorField eps(grid.quad_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      double uxx = 0.0, uxy = 0.0, uyx = 0.0, uyy = 0.0;
      for (int a = 0; a < 4; ++a) {
        const double ux = u[2 * nodes[a]];
        const double uy = u[2 * nodes[a] + 1];
        uxx += t.dx[q][a] * ux;
        uxy += t.dy[q][a] * ux;
        uyx += t.dx[q][a] * uy;
        uyy += t.dy[q][a] * uy;
      }
      SymTensor& e = eps[4 * c + q];
      e.xx = uxx;
      e.yy = uyy;
      e.xy = 0.5 * (uxy + uyx);
    }
  }
  return eps;
}

QuadScalar divergence(const Grid& grid, std::span<const double> u) {
  const TensorField eps = strain(grid, u);
  QuadScalar div(eps.size());
  for (std::size_t q = 0; q < eps.size(); ++q) div[q] = eps[q].trace();
  return div;
}

std::vector<double> stress_load(const Grid& grid, std::span<const SymTensor> s) {
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::vector<double> load(2 * grid.node_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      const SymTensor& sq = s[4 * c + q];
      for (int a = 0; a < 4; ++a) {
        load[2 * nodes[a]] += w * (sq.xx * t.dx[q][a] + sq.xy * t.dy[q][a]);
        load[2 * nodes[a] + 1] += w * (sq.yy * t.dy[q][a] + sq.xy * t.dx[q][a]);
      }
    }
  }
  return load;
}

std::vector<double> divergence_scalar_weighted_load(const Grid& grid, std::span<const double> s) {
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::vector<double> load(2 * grid.node_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      const double sq = s[4 * c + q];
      for (int a = 0; a < 4; ++a) {
        load[2 * nodes[a]] += w * sq * t.dx[q][a];
        load[2 * nodes[a] + 1] += w * sq * t.dy[q][a];
      }
    }
  }
  return load;
}

std::vector<double> body_force_load(const Grid& grid, std::span<const double> force_xy) {
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::vector<double> load(2 * grid.node_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      const int k = 4 * c + q;
      for (int a = 0; a < 4; ++a) {
        load[2 * nodes[a]] += w * force_xy[2 * k] * t.value[q][a];
        load[2 * nodes[a] + 1] += w * force_xy[2 * k + 1] * t.value[q][a];
      }
    }
  }
  return load;
}

std::vector<double> scalar_source_load(const Grid& grid, std::span<const double> s) {
  const Q1Tables t(grid.h());
  const double w = grid.quad_weight();
  std::vector<double> load(grid.node_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      const double sq = s[4 * c + q];
      for (int a = 0; a < 4; ++a) load[nodes[a]] += w * sq * t.value[q][a];
    }
  }
  return load;
}

std::vector<double> boundary_flux_load(const Grid& grid, std::span<const double> g) {
  const double gp = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> s = {0.5 - gp, 0.5 + gp};
  const double w = 0.5 * grid.h();
  std::vector<double> load(grid.node_count(), 0.0);
  for (const auto& edge : grid.boundary_edges()) {
    for (double sq : s) {
      const double gq = (1.0 - sq) * g[edge[0]] + sq * g[edge[1]];
      load[edge[0]] += w * gq * (1.0 - sq);
      load[edge[1]] += w * gq * sq;
    }
  }
  return load;
}

QuadScalar interpolate(const Grid& grid, std::span<const double> nodal) {
  const Q1Tables t(grid.h());
  QuadScalar out(grid.quad_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += t.value[q][a] * nodal[nodes[a]];
      out[4 * c + q] = v;
    }
  }
  return out;
}

std::vector<std::array<double, 2>> gradient(const Grid& grid, std::span<const double> nodal) {
  const Q1Tables t(grid.h());
  std::vector<std::array<double, 2>> out(grid.quad_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < 4; ++q) {
      double gx = 0.0, gy = 0.0;
      for (int a = 0; a < 4; ++a) {
        gx += t.dx[q][a] * nodal[nodes[a]];
        gy += t.dy[q][a] * nodal[nodes[a]];
      }
      out[4 * c + q] = {gx, gy};
    }
  }
  return out;
}

double integrate(const Grid& grid, std::span<const double> quad_values) {
  double s = 0.0;
  for (double v : quad_values) s += v;
  return s * grid.quad_weight();
}

NodalScalar sample_nodes(const Grid& grid, const std::function<double(double, double)>& f) {
  NodalScalar out(grid.node_count());
  for (int n = 0; n < grid.node_count(); ++n) {
    const Point2 p = grid.node_point(n);
    out[n] = f(p.x, p.y);
  }
  return out;
}

QuadScalar sample_quad(const Grid& grid, const std::function<double(double, double)>& f) {
  QuadScalar out(grid.quad_count());
  for (int q = 0; q < grid.quad_count(); ++q) {
    const Point2 p = grid.quad_point(q);
    out[q] = f(p.x, p.y);
  }
  return out;
}

}  // namespace thermoplast

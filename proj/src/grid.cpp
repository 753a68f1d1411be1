#include "thermoplast/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoplast {

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly), h_(0.0) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("grid: nx and ny must be at least 2, got " + std::to_string(nx) + "x" +
                                std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("grid: extents must be positive");
  const double hx = lx / nx;
  const double hy = ly / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw std::invalid_argument("grid: cells must be square (lx/nx == ly/ny)");
  }
  h_ = hx;
}

Point2 Grid::node_point(int n) const {
  const int i = n % (nx_ + 1);
  const int j = n / (nx_ + 1);
  return {i * h_, j * h_};
}

bool Grid::on_boundary(int n) const {
  const int i = n % (nx_ + 1);
  const int j = n / (nx_ + 1);
  return i == 0 || j == 0 || i == nx_ || j == ny_;
}

std::array<int, 4> Grid::cell_nodes(int cell) const {
  const int i = cell % nx_;
  const int j = cell / nx_;
  return {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1)};
}

Point2 Grid::quad_point(int q) const {
  const double g = 0.5 / std::sqrt(3.0);
  const int cell = q / 4;
  const int i = cell % nx_;
  const int j = cell / nx_;
  const int local = q % 4;
  const double ox = (local % 2 == 0) ? 0.5 - g : 0.5 + g;
  const double oy = (local < 2) ? 0.5 - g : 0.5 + g;
  return {(i + ox) * h_, (j + oy) * h_};
}

std::vector<std::array<int, 2>> Grid::boundary_edges() const {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(2 * (nx_ + ny_));
  for (int i = 0; i < nx_; ++i) {
    edges.push_back({node(i, 0), node(i + 1, 0)});
    edges.push_back({node(i, ny_), node(i + 1, ny_)});
  }
  for (int j = 0; j < ny_; ++j) {
    edges.push_back({node(0, j), node(0, j + 1)});
    edges.push_back({node(nx_, j), node(nx_, j + 1)});
  }
  return edges;
}

Q1Tables::Q1Tables(double h) {
  const double g = 1.0 / std::sqrt(3.0);
  const std::array<double, 4> xi_q = {-g, g, -g, g};
  const std::array<double, 4> eta_q = {-g, -g, g, g};
  const std::array<double, 4> xi_a = {-1.0, 1.0, -1.0, 1.0};
  const std::array<double, 4> eta_a = {-1.0, -1.0, 1.0, 1.0};
  for (int q = 0; q < 4; ++q) {
    offset[q] = {0.5 * (1.0 + xi_q[q]), 0.5 * (1.0 + eta_q[q])};
    offset[q].x *= h;
    offset[q].y *= h;
    for (int a = 0; a < 4; ++a) {
      const double fx = 1.0 + xi_a[a] * xi_q[q];
      const double fy = 1.0 + eta_a[a] * eta_q[q];
      value[q][a] = 0.25 * fx * fy;
      dx[q][a] = 0.25 * xi_a[a] * fy * (2.0 / h);
      dy[q][a] = 0.25 * eta_a[a] * fx * (2.0 / h);
    }
  }
}

}  // namespace thermoplast

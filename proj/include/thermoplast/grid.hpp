#pragma once

#include <array>
#include <vector>

#include "thermoplast/tensors.hpp"

namespace thermoplast {

/// Nodal scalar values, one per grid node.
using NodalScalar = std::vector<double>;
/// Nodal displacement, interleaved (ux, uy) per node.
using NodalVector = std::vector<double>;
/// Scalar values at quadrature points.
using QuadScalar = std::vector<double>;
/// Symmetric tensors at quadrature points.
using TensorField = std::vector<SymTensor>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [0, lx] x [0, ly] split into nx * ny square Q1 cells
/// with 2x2 Gauss quadrature. Node (i, j) has index i + j (nx + 1); cell (i, j)
/// has index i + j nx; quadrature point q of cell c has index 4 c + q.
class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly);

  static Grid unit_square(int n) { return Grid(n, n, 1.0, 1.0); }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double h() const { return h_; }
  double area() const { return lx_ * ly_; }
  double perimeter() const { return 2.0 * (lx_ + ly_); }

  int node_count() const { return (nx_ + 1) * (ny_ + 1); }
  int cell_count() const { return nx_ * ny_; }
  int quad_count() const { return 4 * cell_count(); }

  int node(int i, int j) const { return i + j * (nx_ + 1); }
  Point2 node_point(int n) const;
  bool on_boundary(int n) const;

  /// Local node order: (i, j), (i+1, j), (i, j+1), (i+1, j+1).
  std::array<int, 4> cell_nodes(int cell) const;
  Point2 quad_point(int q) const;
  double quad_weight() const { return 0.25 * h_ * h_; }

  /// Edges of the boundary as node pairs, each of length h.
  std::vector<std::array<int, 2>> boundary_edges() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  double h_;
};

/// Reference Q1 data at the four Gauss points, in physical derivatives for a
/// cell of size h.
struct Q1Tables {
  explicit Q1Tables(double h);
  std::array<std::array<double, 4>, 4> value{};  // [q][a]
  std::array<std::array<double, 4>, 4> dx{};
  std::array<std::array<double, 4>, 4> dy{};
  std::array<Point2, 4> offset{};  // quadrature point relative to cell origin
};

}  // namespace thermoplast

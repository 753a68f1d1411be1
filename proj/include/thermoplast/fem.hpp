#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "thermoplast/grid.hpp"
#include "thermoplast/sparse.hpp"
#include "thermoplast/tensors.hpp"

namespace thermoplast {

/// Galerkin matrix of  int D e(v) : e(w)  for plane-strain Q1 displacements
/// (dof 2 n + c for node n, component c). Boundary dofs are eliminated when
/// `dirichlet` is set.
LinearOperator assemble_elasticity(const Grid& grid, const ElasticityTensor& d, bool dirichlet = true);

/// Stiffness matrix of  int grad v . grad w ; the constants are its kernel.
LinearOperator assemble_laplacian_neumann(const Grid& grid);

/// Consistent Q1 mass matrix.
LinearOperator assemble_mass(const Grid& grid);

/// Symmetric gradient at every quadrature point; zz, xz, yz stay zero.
TensorField strain(const Grid& grid, std::span<const double> u);

/// Divergence of a nodal displacement at the quadrature points.
QuadScalar divergence(const Grid& grid, std::span<const double> u);

/// Load vector  int s : e(v)  for a quadrature stress field.
std::vector<double> stress_load(const Grid& grid, std::span<const SymTensor> s);

/// Load vector  int s div v  (the volumetric stress s Id moved to the right side).
std::vector<double> divergence_scalar_weighted_load(const Grid& grid, std::span<const double> s);

/// Load vector  int F . v  for a body force given at quadrature points as (Fx, Fy) pairs.
std::vector<double> body_force_load(const Grid& grid, std::span<const double> force_xy);

/// Load vector  int s v  for a scalar source at quadrature points.
std::vector<double> scalar_source_load(const Grid& grid, std::span<const double> s);

/// Load vector  int_{boundary} g v ds  for nodal boundary values with 2-point
/// Gauss quadrature on every edge. Interior entries of `g` are ignored.
std::vector<double> boundary_flux_load(const Grid& grid, std::span<const double> g);

/// Q1 interpolation of a nodal scalar at the quadrature points.
QuadScalar interpolate(const Grid& grid, std::span<const double> nodal);

/// Gradient of a nodal scalar at the quadrature points as (dx, dy) pairs.
std::vector<std::array<double, 2>> gradient(const Grid& grid, std::span<const double> nodal);

/// Sum of weight * value over the quadrature points.
double integrate(const Grid& grid, std::span<const double> quad_values);

/// Samples a function of (x, y) at the grid nodes.
NodalScalar sample_nodes(const Grid& grid, const std::function<double(double, double)>& f);

/// Samples a function of (x, y) at the quadrature points.
QuadScalar sample_quad(const Grid& grid, const std::function<double(double, double)>& f);

}  // namespace thermoplast

#pragma once

#include <vector>

#include "thermoplast/grid.hpp"

namespace thermoplast {

/// One time level of the regularized system. `theta` is the homogenized
/// temperature (total minus the boundary lift); `stress` caches
/// D(e(u) - eps_p) and `heat_source` the right-hand side of the heat step that
/// produced `theta`.
struct State {
  double t = 0.0;
  NodalVector u;
  TensorField eps_p;
  NodalScalar theta;
  TensorField stress;
  QuadScalar heat_source;
};

/// Iteration counts and pointwise checks of one completed step.
struct StepInfo {
  int picard_iterations = 0;
  int plastic_iterations = 0;  // summed over Picard iterations
  double picard_change = 0.0;  // last L^r change of theta
  double dissipation_min = 0.0;
  double plastic_trace_max = 0.0;
};

/// Complete run: states[n] lives at time n * dt, theta_tilde[n] is the lift
/// at the same time, steps[n] describes the transition n -> n + 1.
struct Trajectory {
  Grid grid = Grid::unit_square(2);
  double dt = 0.0;
  std::vector<State> states;
  std::vector<NodalScalar> theta_tilde;
  std::vector<StepInfo> steps;
};

}  // namespace thermoplast

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoplast/convex_plasticity.hpp"
#include "thermoplast/diagnostics.hpp"
#include "thermoplast/grid.hpp"
#include "thermoplast/model_config.hpp"
#include "thermoplast/sparse.hpp"
#include "thermoplast/state.hpp"
#include "thermoplast/tensors.hpp"
#include "thermoplast/thermal_lift.hpp"

namespace thermoplast {

/// Fixed-point iteration on the temperature did not converge.
class PicardError : public std::runtime_error {
 public:
  PicardError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  /// L^r change of theta per iteration.
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// A time step failed; carries the index of the step that was being computed
/// and the trajectory completed up to that point.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, int step, std::shared_ptr<const Trajectory> partial)
      : std::runtime_error(what), step_(step), partial_(std::move(partial)) {}
  int step() const { return step_; }
  const Trajectory* partial() const { return partial_.get(); }

 private:
  int step_;
  std::shared_ptr<const Trajectory> partial_;
};

/// Mechanical part of one step at fixed temperature iterate.
struct MechanicsResult {
  NodalVector u;
  TensorField eps_p;
  TensorField stress;
  int iterations = 0;
};

/// Time stepper of the truncated, Yosida-regularized system. Operators and the
/// lift trajectory are built once at construction.
class CoupledSolver {
 public:
  explicit CoupledSolver(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const ElasticityTensor& elasticity() const { return d_; }
  double dt() const { return cfg_.time.dt; }
  int steps() const { return cfg_.steps(); }
  const LiftTrajectory& lift() const { return lift_; }
  const NodalScalar& theta_tilde(int step) const { return lift_.theta.at(step); }

  State initial_state() const;

  /// Load vector of the body force at time t.
  std::vector<double> body_load(double t) const;

  /// f(T_{1/lambda}(theta + theta_tilde)) at the quadrature points.
  QuadScalar thermal_stress(std::span<const double> theta, std::span<const double> theta_tilde) const;

  /// Solves (1 + 1/dt) A u = load(D eps_p) + load(f) + load(F) + A u_old / dt.
  NodalVector elastic_visco_step(std::span<const double> u_old, const TensorField& eps_p_iter,
                                 std::span<const double> f_values, std::span<const double> body) const;

  /// eps_p_old + dt Y(T_iter) pointwise.
  TensorField plastic_update(const TensorField& t_iter, const TensorField& eps_p_old) const;

  /// Implicit local update at fixed total strain: returns eps_p with
  /// eps_p = eps_p_old + dt Y(D(e - eps_p)), solved in closed form.
  TensorField local_return(const TensorField& e, const TensorField& eps_p_old) const;

  /// Elastic-viscous solve coupled to the plastic update.
  MechanicsResult solve_mechanics(const State& s, std::span<const double> f_values,
                                  std::span<const double> body) const;

  /// Right-hand side of the heat step: -f div u_t + T_{1/lambda}(eps_p_t : T).
  QuadScalar heat_source(std::span<const double> f_values, std::span<const double> div_u_rate,
                         const TensorField& eps_p_rate, const TensorField& t_iter) const;

  /// Heat step with the right-hand side built from the given iterate.
  NodalScalar heat_step(std::span<const double> theta_old, std::span<const double> theta_iter,
                        std::span<const double> theta_tilde, const TensorField& eps_p_rate,
                        const TensorField& t_iter, std::span<const double> div_u_rate) const;

  /// M (theta - theta_old) / dt + K theta = int source v.
  NodalScalar heat_step_with_source(std::span<const double> theta_old, std::span<const double> source) const;

  /// Discrete L^r norm of a nodal scalar, r from the solver settings.
  double lr_norm(std::span<const double> nodal) const;

  /// Advances `s` (at step index `step`) by one time step.
  State picard_step(const State& s, int step, StepInfo* info = nullptr) const;

  /// Residual of the coupled step at the returned state: the max of the
  /// relative mechanical residual, the plastic-flow mismatch and the L^r norm
  /// of the temperature error implied by the heat residual.
  double monolithic_residual(const State& before, const State& after, int step) const;

 private:
  ModelConfig cfg_;
  Grid grid_;
  ElasticityTensor d_;
  YieldSurface ys_;
  YosidaParam yp_;
  LinearOperator elastic_;
  LinearOperator visco_;
  LinearOperator mass_;
  LinearOperator heat_;
  LiftTrajectory lift_;
  SolveOptions solve_opts_;
};

using SnapshotSink = std::function<void(const State&, const NodalScalar& theta_tilde, int step)>;

/// Runs all steps; calls `sink` for step 0 and every `output.every`-th step
/// (always including the last).
Trajectory run_simulation(const ModelConfig& cfg, const SnapshotSink& sink = {});

/// One member of a lambda sweep.
struct SweepMember {
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  Trajectory trajectory;
  DiagnosticsReport report;
};

struct SweepResult {
  std::vector<SweepMember> members;
  std::vector<int> output_steps;
  /// metrics[p][k]: pair (p, p + 1) at output_steps[k]; NaN when a member failed.
  std::vector<std::vector<double>> metrics;
};

/// Runs the scenario for each lambda (strictly decreasing) and measures
/// consecutive-pair distances of the stresses. Duplicate values are allowed.
SweepResult lambda_sweep(const ModelConfig& cfg, const std::vector<double>& lambdas,
                         const std::function<void(const SweepMember&)>& on_member = {});

}  // namespace thermoplast

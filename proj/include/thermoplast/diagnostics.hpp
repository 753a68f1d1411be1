#pragma once

#include <span>
#include <string>
#include <vector>

#include "thermoplast/convex_plasticity.hpp"
#include "thermoplast/grid.hpp"
#include "thermoplast/model_config.hpp"
#include "thermoplast/state.hpp"
#include "thermoplast/tensors.hpp"

namespace thermoplast {

/// Energy quantities at one time level. Accumulated terms are right-endpoint
/// sums over the completed steps.
struct EnergyRow {
  double stress_energy = 0.0;   // int |T|^2
  double viscous_work = 0.0;    // sum dt int |e(u_t)|^2
  double theta_mass = 0.0;      // int |theta|
  double trunc_gradient = 0.0;  // sum dt int |grad T_K(theta)|^2
};

/// Homogenized temperature, one row per state.
std::vector<EnergyRow> energy_report(const Trajectory& traj, double trunc_K);

struct BalanceRow {
  double m_lambda = 0.0;   // int M_lambda(T^n)
  double compliance = 0.0; // sum dt int D^-1 T_t : T_t
  double work = 0.0;       // sum dt int e(u_t) : T_t
  double residual = 0.0;   // |m_lambda + compliance - work|
  double relative = 0.0;   // residual over the largest of the three terms
};

std::vector<BalanceRow> m_lambda_balance(const Trajectory& traj, const ElasticityTensor& d,
                                         const YieldSurface& ys, const YosidaParam& yp);

/// Accumulated sum dt int |(T^{n+1} - T^n) / dt|^2 per state, i.e. the square of
/// the L2(0, t; L2) norm of the stress rate.
std::vector<double> stress_rate_norm(const Trajectory& traj);

/// (sum dt int |theta|^q + |grad theta|^q)^(1/q) per state over the homogenized
/// temperature. Throws std::invalid_argument unless 1 <= q < 5/4.
std::vector<double> boccardo_norm(const Trajectory& traj, double q);

/// Same functional for an explicit nodal history with uniform step.
double boccardo_norm(const Grid& grid, const std::vector<NodalScalar>& theta, double dt, double q);

/// int D^-1 (a - b) : (a - b). Throws std::invalid_argument on size mismatch.
double cauchy_metric(const Grid& grid, std::span<const SymTensor> a, std::span<const SymTensor> b,
                     const ElasticityTensor& d);

/// Smooth renormalization S with S' = 1 on [-M/2, M/2], cubic smoothstep decay
/// to 0 at |r| = M, and S(0) = 0 (plus an optional constant shift).
struct RenormBump {
  double M = 1.0;
  double shift = 0.0;
  double S(double r) const;
  double dS(double r) const;
  double d2S(double r) const;
};

/// Test function (1 + x^2 / (2 lx^2) + y / (4 ly)) (1 - t / t_end)^2.
double renorm_test_function(double x, double y, double t, double lx, double ly, double t_end);
void renorm_test_gradient(double x, double y, double t, double lx, double ly, double t_end, double& gx,
                          double& gy);

struct RenormTerms {
  double time_term = 0.0;     // -sum int S(w^n)(phi^{n+1} - phi^n)
  double initial_term = 0.0;  // -int S(w^0) phi^0
  double diffusion = 0.0;     // sum dt int S'(w) grad w . grad phi
  double curvature = 0.0;     // sum dt int S''(w) |grad w|^2 phi
  double source = 0.0;        // sum dt int q S'(w) phi
  // S' and S'' are taken at the step midpoint (w^n + w^{n-1}) / 2, as is one
  // grad w factor of the curvature term; the other factors use step n.
  double residual() const;    // normalized, see renorm_residual
};

/// All five integrals of the renormalized identity for w = theta - theta_tilde.
/// `w[n]` at time n dt, `q[n]` the quadrature source that produced `w[n]`
/// (q[0] unused). The final time is (w.size() - 1) dt.
RenormTerms renorm_terms(const Grid& grid, const std::vector<NodalScalar>& w, const std::vector<QuadScalar>& q,
                         double dt, const RenormBump& s);

/// |time + initial + diffusion + curvature - source| divided by the largest of
/// |time + initial|, |diffusion|, |curvature|, |source|.
double renorm_residual(const Grid& grid, const std::vector<NodalScalar>& w, const std::vector<QuadScalar>& q,
                       double dt, const RenormBump& s);

/// Per K: sqrt(sum dt int (T_{K+C}(theta) - T_K(theta))^2 + |grad theta|^2 1{K < |theta| < K + C})
/// on the total temperature theta = homogenized + lift.
std::vector<double> trunc_tail(const Trajectory& traj, const std::vector<double>& K_list, double C);
std::vector<double> trunc_tail(const Grid& grid, const std::vector<NodalScalar>& theta, double dt,
                               const std::vector<double>& K_list, double C);

/// Smallest pointwise eps_p_t : T over all steps and quadrature points.
double dissipation_min(const Trajectory& traj);

/// Largest |tr eps_p| over all states and quadrature points.
double plastic_trace_max(const Trajectory& traj);

struct DiagnosticsRow {
  int step = 0;
  double t = 0.0;
  EnergyRow energy;
  double dissipation_min = 0.0;  // over the step ending here
  double m_lambda_residual = 0.0;
  double m_lambda_relative = 0.0;
  double stress_rate_norm = 0.0;
  double boccardo_norm = 0.0;
  std::vector<double> trunc_tail;
  int picard_iterations = 0;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsRow> rows;  // one per state
  std::vector<double> tail_K;
  double tail_C = 0.0;
  std::vector<double> renorm_M;
  std::vector<double> renorm_residual;
  double dissipation_min = 0.0;
  double plastic_trace_max = 0.0;
  double m_lambda_max_relative = 0.0;
};

DiagnosticsReport build_report(const Trajectory& traj, const ModelConfig& cfg);

struct SummaryCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Pass/fail of the report against the configured thresholds.
std::vector<SummaryCheck> summarize(const DiagnosticsReport& report, const ModelConfig& cfg);

}  // namespace thermoplast

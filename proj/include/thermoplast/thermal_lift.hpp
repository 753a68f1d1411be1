#pragma once

#include <string>
#include <vector>

#include "thermoplast/grid.hpp"
#include "thermoplast/sparse.hpp"

namespace thermoplast {

/// Analytic boundary heat flux g(x, y, t).
struct BoundaryFluxSpec {
  enum class Kind { zero, constant, sin_time, x_linear, smooth };
  Kind kind = Kind::zero;
  double value = 0.0;  // amplitude
  double omega = 1.0;  // angular frequency for sin_time and smooth

  double evaluate(double x, double y, double t) const;
  friend bool operator==(const BoundaryFluxSpec&, const BoundaryFluxSpec&) = default;
};

std::string to_string(BoundaryFluxSpec::Kind kind);
bool parse_flux_kind(const std::string& name, BoundaryFluxSpec::Kind& out);

/// Time-sampled boundary values of g on the grid nodes. Sample k holds the
/// time k * sample_dt; interior node entries are zero.
class NeumannData {
 public:
  NeumannData(const Grid& grid, double sample_dt, std::vector<NodalScalar> samples);

  static NeumannData from_spec(const Grid& grid, const BoundaryFluxSpec& spec, double t_end, double dt);

  double sample_dt() const { return sample_dt_; }
  int sample_count() const { return static_cast<int>(samples_.size()); }
  const NodalScalar& sample(int k) const { return samples_.at(k); }

  NeumannData scaled(double factor) const;
  NeumannData plus(const NeumannData& other) const;

 private:
  Grid grid_;
  double sample_dt_;
  std::vector<NodalScalar> samples_;
};

/// Implicit Euler trajectory of the lift; theta[0] is identically zero.
struct LiftTrajectory {
  double dt = 0.0;
  std::vector<NodalScalar> theta;
};

/// Solves  M (th^{n+1} - th^n) / dt + K th^{n+1} = int_{boundary} g(t^{n+1}) v.
LiftTrajectory solve_tilde_theta(const Grid& grid, const NeumannData& g, double t_end, double dt,
                                 const SolveOptions& opts = {});

/// Discrete norms of the lift stability estimate.
struct LiftEstimate {
  double rate_l2l2 = 0.0;   // || th_t ||_{L2(0,T; L2)}
  double state_linf_h1 = 0.0;  // || th ||_{Linf(0,T; H1)}
  double data_h1l2 = 0.0;   // || g ||_{H1(0,T; L2(boundary))}

  double lhs() const { return rate_l2l2 + state_linf_h1; }
  double ratio() const { return data_h1l2 > 0.0 ? lhs() / data_h1l2 : 0.0; }
};

LiftEstimate lift_estimate_report(const Grid& grid, const LiftTrajectory& trajectory, const NeumannData& g);

}  // namespace thermoplast
